#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace wormlab {

// All timestamps are integer microseconds. Simulation times are offsets from
// t=0; log times are absolute (Unix epoch, UTC). The default wall-clock base
// keeps output byte-identical across runs.
inline constexpr int64_t kMicrosPerSecond = 1'000'000;

// 2009-07-23 10:00:00 UTC
inline constexpr int64_t kDefaultWallclockBaseUs = 1248343200LL * kMicrosPerSecond;

int64_t seconds_to_us(double seconds);

// Civil UTC <-> epoch conversions (proleptic Gregorian).
int64_t civil_to_epoch_s(int year, int month, int day, int hour, int minute, int second);
void epoch_s_to_civil(int64_t epoch_s, int& year, int& month, int& day,
                      int& hour, int& minute, int& second);

// "YYYY-MM-DD HH:MM:SS", second resolution (host logs).
std::string format_host_time(int64_t t_us);
std::optional<int64_t> parse_host_time(std::string_view date, std::string_view time);

// "MM/DD-HH:MM:SS.ffffff", microsecond resolution (IDS alert log). The year is
// not encoded; callers supply it (run logs carry it in the file header).
std::string format_ids_time(int64_t t_us);
std::optional<int64_t> parse_ids_time(std::string_view text, int year);

}  // namespace wormlab

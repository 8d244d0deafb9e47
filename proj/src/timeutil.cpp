#include "timeutil.hpp"

#include <cmath>
#include <cstdio>

namespace wormlab {

int64_t seconds_to_us(double seconds) {
    return static_cast<int64_t>(std::llround(seconds * 1e6));
}

namespace {

// Howard Hinnant's days-from-civil algorithm; valid far beyond any log range.
int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

void civil_from_days(int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int64_t yr = static_cast<int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yr + (m <= 2));
}

bool in_range(int v, int lo, int hi) { return v >= lo && v <= hi; }

bool parse_fixed_int(std::string_view s, size_t pos, size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (size_t i = 0; i < len; ++i) {
        char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

}  // namespace

int64_t civil_to_epoch_s(int year, int month, int day, int hour, int minute, int second) {
    return days_from_civil(year, month, day) * 86400 + hour * 3600 + minute * 60 + second;
}

void epoch_s_to_civil(int64_t epoch_s, int& year, int& month, int& day,
                      int& hour, int& minute, int& second) {
    int64_t days = epoch_s / 86400;
    int64_t rem = epoch_s % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    civil_from_days(days, year, month, day);
    hour = static_cast<int>(rem / 3600);
    minute = static_cast<int>((rem % 3600) / 60);
    second = static_cast<int>(rem % 60);
}

std::string format_host_time(int64_t t_us) {
    int y, mo, d, h, mi, s;
    int64_t es = t_us / kMicrosPerSecond;
    if (t_us < 0 && t_us % kMicrosPerSecond != 0) es -= 1;
    epoch_s_to_civil(es, y, mo, d, h, mi, s);
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d %02d:%02d:%02d", y, mo, d, h, mi, s);
    return buf;
}

std::optional<int64_t> parse_host_time(std::string_view date, std::string_view time) {
    // date: YYYY-MM-DD  time: HH:MM:SS
    if (date.size() != 10 || time.size() != 8) return std::nullopt;
    if (date[4] != '-' || date[7] != '-' || time[2] != ':' || time[5] != ':') return std::nullopt;
    int y, mo, d, h, mi, s;
    if (!parse_fixed_int(date, 0, 4, y) || !parse_fixed_int(date, 5, 2, mo) ||
        !parse_fixed_int(date, 8, 2, d) || !parse_fixed_int(time, 0, 2, h) ||
        !parse_fixed_int(time, 3, 2, mi) || !parse_fixed_int(time, 6, 2, s)) {
        return std::nullopt;
    }
    if (!in_range(mo, 1, 12) || !in_range(d, 1, 31) || !in_range(h, 0, 23) ||
        !in_range(mi, 0, 59) || !in_range(s, 0, 59)) {
        return std::nullopt;
    }
    return civil_to_epoch_s(y, mo, d, h, mi, s) * kMicrosPerSecond;
}

std::string format_ids_time(int64_t t_us) {
    int y, mo, d, h, mi, s;
    int64_t es = t_us / kMicrosPerSecond;
    int64_t frac = t_us % kMicrosPerSecond;
    if (frac < 0) {
        frac += kMicrosPerSecond;
        es -= 1;
    }
    epoch_s_to_civil(es, y, mo, d, h, mi, s);
    char buf[28];
    std::snprintf(buf, sizeof(buf), "%02d/%02d-%02d:%02d:%02d.%06d",
                  mo, d, h, mi, s, static_cast<int>(frac));
    return buf;
}

std::optional<int64_t> parse_ids_time(std::string_view text, int year) {
    // MM/DD-HH:MM:SS.ffffff
    if (text.size() != 21) return std::nullopt;
    if (text[2] != '/' || text[5] != '-' || text[8] != ':' || text[11] != ':' ||
        text[14] != '.') {
        return std::nullopt;
    }
    int mo, d, h, mi, s, frac;
    if (!parse_fixed_int(text, 0, 2, mo) || !parse_fixed_int(text, 3, 2, d) ||
        !parse_fixed_int(text, 6, 2, h) || !parse_fixed_int(text, 9, 2, mi) ||
        !parse_fixed_int(text, 12, 2, s) || !parse_fixed_int(text, 15, 6, frac)) {
        return std::nullopt;
    }
    if (!in_range(mo, 1, 12) || !in_range(d, 1, 31) || !in_range(h, 0, 23) ||
        !in_range(mi, 0, 59) || !in_range(s, 0, 59)) {
        return std::nullopt;
    }
    return civil_to_epoch_s(year, mo, d, h, mi, s) * kMicrosPerSecond + frac;
}

}  // namespace wormlab

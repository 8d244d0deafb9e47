#pragma once

// Single vendored include point for nlohmann/json.
#include <json.hpp>

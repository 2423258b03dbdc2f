#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "ra/model.hpp"

namespace ra {

// Bundled scenarios used throughout the experiments: fig1a (4 request types,
// 14 pools), fig1b (2 request types, 6 pools) and fig2 (3 request types,
// 15 pools).
SystemModel fixture_fig1a();
SystemModel fixture_fig1b();
SystemModel fixture_fig2();

std::optional<SystemModel> fixture_by_name(std::string_view name);
std::vector<std::string_view> fixture_names();

}  // namespace ra

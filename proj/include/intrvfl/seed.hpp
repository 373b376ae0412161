#pragma once

#include <cstdint>
#include <string_view>

namespace intrvfl {

// Deterministic seed splitting: a hash of (base, role tag, index). Every
// random stream in a run is derived from the one base seed this way, so that
// projection, fold and GA streams never collide.
std::uint64_t derive_seed(std::uint64_t base, std::string_view role, std::uint64_t index);

}  // namespace intrvfl

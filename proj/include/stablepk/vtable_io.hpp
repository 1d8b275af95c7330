#pragma once

#include <string>
#include <string_view>

#include "stablepk/gibbs.hpp"

namespace stablepk {

// {alpha, model, N, seed, rows: [[{v, sigma, method, flagged}...]...], certification}.
// Doubles are written in shortest round-trip form, so reading back is exact.
std::string vtable_to_json(const gibbs::VTable& vt, int indent = 2);
gibbs::VTable vtable_from_json(std::string_view text);
// Columns n,k,v,sigma,method.
std::string vtable_to_csv(const gibbs::VTable& vt);

}  // namespace stablepk

#pragma once

#include <cstddef>
#include <cstdint>

#include "fconc/domain.hpp"
#include "fconc/field.hpp"
#include "fconc/transform.hpp"

namespace fconc {

/// f = F^{-1}(g) with g the minimum of n_kinks + 1 random affine pieces,
/// rescaled into a random window (F(a), F(b)) with [a, b] inside Int I.
/// Deterministic in `seed`. The result is F-concave up to roundoff.
Field sample_f_concave(const Transform& F, const Domain& domain, std::uint64_t seed, std::size_t n_kinks);

/// f = F^{-1}(F(b) - (F(b) - F(a)) exp(-<x - x_star, nu>)), nonconstant and
/// F-concave on the half-space <x - x_star, nu> >= 0. Needs a < b in Int I
/// and the whole domain inside the half-space.
Field exponential_barrier(const Transform& F, const Domain& domain, double a, double b, Point x_star = {},
                          Point nu = {1.0, 0.0});

}  // namespace fconc

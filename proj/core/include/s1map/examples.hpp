#pragma once

#include "s1map/circle_map.hpp"

namespace s1map::examples {

/// L = t + 0.3 sin(2 pi t): one wave, two critical points, two values.
CircleMap two_wave();

/// L = t + 0.1 sin(4 pi t): four critical points, four values, and the
/// half-turn translation symmetry f(x + 1/2) = f(x) + 1/2.
CircleMap four_wave();

/// two_wave plus 0.05 cos(4 pi t): a generic perturbation with no rotation
/// symmetry.
CircleMap two_wave_perturbed();

/// L = 2t: a degree-two covering with no critical points.
CircleMap degree_two_covering();

/// L = t + b sin(6 pi t) with b tuned so the six critical points share just
/// three critical values {0, 1/3, 2/3}: an odd exceptional-value count.
CircleMap three_value_wave();

/// L = t + A sin(4 pi t) with A tuned so the four critical points share two
/// values a half turn apart: n = 2 with the half-turn symmetry, the twisted
/// quotient case.
CircleMap twisted_pair_wave();

/// L = t + A sin(2 pi t) with A tuned so the maximum sits exactly one turn
/// above the minimum: both critical points share a single critical value,
/// n = 1.
CircleMap one_value_wave();

}  // namespace s1map::examples

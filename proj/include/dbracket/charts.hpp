#pragma once

#include <cstddef>
#include <vector>

#include "dbracket/functions.hpp"
#include "dbracket/leaf.hpp"
#include "dbracket/types.hpp"

namespace dbracket::charts {

/// Upper sheet x^2 + y^2 - z^2 = -1 by stereographic projection from
/// (0, 0, -1): u = x / (1 + z), v = y / (1 + z), on the open unit disc.
/// Samples are drawn with u^2 + v^2 <= 0.81.
LeafChart hyperbolic_disc();

/// Upper sheet x^2 + y^2 - z^2 = -c^2 in coordinates (u, nu):
/// (c sinh nu cos u, c sinh nu sin u, c cosh nu), nu > 0, |u| < pi.
LeafChart two_sheet_hyperboloid(double c);

/// One-sheeted hyperboloid x^2 + y^2 - z^2 = l^2 in coordinates (u, nu):
/// (l cosh nu cos u, l cosh nu sin u, l sinh nu), |u| < pi.
LeafChart one_sheet_hyperboloid(double l);

/// Upper light cone (t cos u, t sin u, t), coordinates (u, t), t > 0.
LeafChart light_cone();

/// Sphere of the given radius in R^3, coordinates (theta, phi) with
/// (R sin th cos ph, R sin th sin ph, R cos th), 0 < th < pi, |ph| < pi.
LeafChart sphere(double radius);

/// Identity chart on R^{2n}.
LeafChart canonical(std::size_t n);

/// Leaf through `base_point` cut out by the level sets of `casimirs`.
/// Coordinates are the orthogonal projection onto the tangent space at the
/// base point; phi solves for the normal offset by Newton iteration. Jacobians
/// are analytic (implicit function theorem). Domain: |u| < radius.
LeafChart level_set(std::vector<ScalarFunction> casimirs,
                    const Vector& base_point, double radius);

}  // namespace dbracket::charts

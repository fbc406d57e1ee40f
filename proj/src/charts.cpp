#include "dbracket/charts.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <utility>

#include "dbracket/error.hpp"
#include "dbracket/numerics.hpp"

namespace dbracket::charts {

namespace {

using std::numbers::pi;

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Angular coordinate convention shared by the rotationally symmetric charts.
bool angle_in_range(double a) { return a > -pi && a < pi; }

}  // namespace

LeafChart hyperbolic_disc() {
  LeafChart::Definition def;
  def.name = "hyperbolic_disc";
  def.ambient_dim = 3;
  def.leaf_dim = 2;
  def.phi = [](const Vector& u) -> Vector {
    const double r2 = u.squaredNorm();
    const double s = 1.0 - r2;
    return vec3(2 * u[0] / s, 2 * u[1] / s, (1 + r2) / s);
  };
  def.coordinates = [](const Vector& x) -> Vector {
    return vec2(x[0] / (1 + x[2]), x[1] / (1 + x[2]));
  };
  def.jac_phi = [](const Vector& u) -> Matrix {
    const double s = 1.0 - u.squaredNorm();
    const double s2 = s * s;
    Matrix j(3, 2);
    j << (2 * s + 4 * u[0] * u[0]) / s2, 4 * u[0] * u[1] / s2,
        4 * u[0] * u[1] / s2, (2 * s + 4 * u[1] * u[1]) / s2,
        4 * u[0] / s2, 4 * u[1] / s2;
    return j;
  };
  def.jac_coordinates = [](const Vector& x) -> Matrix {
    const double a = 1.0 / (1 + x[2]);
    Matrix j(2, 3);
    j << a, 0, -x[0] * a * a, 0, a, -x[1] * a * a;
    return j;
  };
  def.domain = [](const Vector& u) { return u.squaredNorm() < 1.0; };
  def.sampler = [](std::mt19937_64& rng) -> Vector {
    const double r = 0.9 * std::sqrt(uniform(rng, 0.0, 1.0));
    const double t = uniform(rng, -pi, pi);
    return vec2(r * std::cos(t), r * std::sin(t));
  };
  return LeafChart(std::move(def));
}

LeafChart two_sheet_hyperboloid(double c) {
  if (!(c > 0)) throw Error(ErrorCode::InvalidArgument, "c must be positive", c);
  LeafChart::Definition def;
  def.name = "two_sheet_hyperboloid";
  def.ambient_dim = 3;
  def.leaf_dim = 2;
  def.phi = [c](const Vector& u) -> Vector {
    return vec3(c * std::sinh(u[1]) * std::cos(u[0]),
                c * std::sinh(u[1]) * std::sin(u[0]), c * std::cosh(u[1]));
  };
  def.coordinates = [c](const Vector& x) -> Vector {
    return vec2(std::atan2(x[1], x[0]), std::asinh(std::hypot(x[0], x[1]) / c));
  };
  def.jac_phi = [c](const Vector& u) -> Matrix {
    const double sh = std::sinh(u[1]), ch = std::cosh(u[1]);
    const double co = std::cos(u[0]), si = std::sin(u[0]);
    Matrix j(3, 2);
    j << -c * sh * si, c * ch * co, c * sh * co, c * ch * si, 0, c * sh;
    return j;
  };
  def.jac_coordinates = [c](const Vector& x) -> Matrix {
    const double rho2 = x[0] * x[0] + x[1] * x[1];
    const double rho = std::sqrt(rho2);
    const double b = 1.0 / (rho * std::sqrt(c * c + rho2));
    Matrix j(2, 3);
    j << -x[1] / rho2, x[0] / rho2, 0, x[0] * b, x[1] * b, 0;
    return j;
  };
  def.domain = [](const Vector& u) { return angle_in_range(u[0]) && u[1] > 0; };
  def.sampler = [](std::mt19937_64& rng) -> Vector {
    const double a = uniform(rng, -3.0, 3.0);
    return vec2(a, uniform(rng, 0.2, 2.0));
  };
  return LeafChart(std::move(def));
}

LeafChart one_sheet_hyperboloid(double l) {
  if (!(l > 0)) throw Error(ErrorCode::InvalidArgument, "l must be positive", l);
  LeafChart::Definition def;
  def.name = "one_sheet_hyperboloid";
  def.ambient_dim = 3;
  def.leaf_dim = 2;
  def.phi = [l](const Vector& u) -> Vector {
    return vec3(l * std::cosh(u[1]) * std::cos(u[0]),
                l * std::cosh(u[1]) * std::sin(u[0]), l * std::sinh(u[1]));
  };
  def.coordinates = [l](const Vector& x) -> Vector {
    return vec2(std::atan2(x[1], x[0]), std::asinh(x[2] / l));
  };
  def.jac_phi = [l](const Vector& u) -> Matrix {
    const double sh = std::sinh(u[1]), ch = std::cosh(u[1]);
    const double co = std::cos(u[0]), si = std::sin(u[0]);
    Matrix j(3, 2);
    j << -l * ch * si, l * sh * co, l * ch * co, l * sh * si, 0, l * ch;
    return j;
  };
  def.jac_coordinates = [l](const Vector& x) -> Matrix {
    const double rho2 = x[0] * x[0] + x[1] * x[1];
    Matrix j(2, 3);
    j << -x[1] / rho2, x[0] / rho2, 0, 0, 0, 1.0 / std::sqrt(l * l + x[2] * x[2]);
    return j;
  };
  def.domain = [](const Vector& u) { return angle_in_range(u[0]); };
  def.sampler = [](std::mt19937_64& rng) -> Vector {
    const double a = uniform(rng, -3.0, 3.0);
    return vec2(a, uniform(rng, -2.0, 2.0));
  };
  return LeafChart(std::move(def));
}

LeafChart light_cone() {
  LeafChart::Definition def;
  def.name = "light_cone";
  def.ambient_dim = 3;
  def.leaf_dim = 2;
  def.phi = [](const Vector& u) -> Vector {
    return vec3(u[1] * std::cos(u[0]), u[1] * std::sin(u[0]), u[1]);
  };
  def.coordinates = [](const Vector& x) -> Vector {
    return vec2(std::atan2(x[1], x[0]), x[2]);
  };
  def.jac_phi = [](const Vector& u) -> Matrix {
    const double co = std::cos(u[0]), si = std::sin(u[0]);
    Matrix j(3, 2);
    j << -u[1] * si, co, u[1] * co, si, 0, 1;
    return j;
  };
  def.jac_coordinates = [](const Vector& x) -> Matrix {
    const double rho2 = x[0] * x[0] + x[1] * x[1];
    Matrix j(2, 3);
    j << -x[1] / rho2, x[0] / rho2, 0, 0, 0, 1;
    return j;
  };
  def.domain = [](const Vector& u) { return angle_in_range(u[0]) && u[1] > 0; };
  def.sampler = [](std::mt19937_64& rng) -> Vector {
    const double a = uniform(rng, -3.0, 3.0);
    return vec2(a, uniform(rng, 0.2, 2.0));
  };
  return LeafChart(std::move(def));
}

LeafChart sphere(double radius) {
  if (!(radius > 0)) {
    throw Error(ErrorCode::InvalidArgument, "radius must be positive", radius);
  }
  const double r = radius;
  LeafChart::Definition def;
  def.name = "sphere";
  def.ambient_dim = 3;
  def.leaf_dim = 2;
  def.phi = [r](const Vector& u) -> Vector {
    return vec3(r * std::sin(u[0]) * std::cos(u[1]),
                r * std::sin(u[0]) * std::sin(u[1]), r * std::cos(u[0]));
  };
  def.coordinates = [](const Vector& x) -> Vector {
    return vec2(std::atan2(std::hypot(x[0], x[1]), x[2]), std::atan2(x[1], x[0]));
  };
  def.jac_phi = [r](const Vector& u) -> Matrix {
    const double st = std::sin(u[0]), ct = std::cos(u[0]);
    const double sp = std::sin(u[1]), cp = std::cos(u[1]);
    Matrix j(3, 2);
    j << r * ct * cp, -r * st * sp, r * ct * sp, r * st * cp, -r * st, 0;
    return j;
  };
  def.jac_coordinates = [](const Vector& x) -> Matrix {
    const double rho2 = x[0] * x[0] + x[1] * x[1];
    const double rho = std::sqrt(rho2);
    const double r2 = rho2 + x[2] * x[2];
    Matrix j(2, 3);
    j << x[2] * x[0] / (rho * r2), x[2] * x[1] / (rho * r2), -rho / r2,
        -x[1] / rho2, x[0] / rho2, 0;
    return j;
  };
  def.domain = [](const Vector& u) {
    return u[0] > 0 && u[0] < pi && angle_in_range(u[1]);
  };
  def.sampler = [](std::mt19937_64& rng) -> Vector {
    const double t = uniform(rng, 0.3, pi - 0.3);
    return vec2(t, uniform(rng, -3.0, 3.0));
  };
  return LeafChart(std::move(def));
}

LeafChart canonical(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(2 * n);
  LeafChart::Definition def;
  def.name = "canonical";
  def.ambient_dim = 2 * n;
  def.leaf_dim = 2 * n;
  def.phi = [](const Vector& u) -> Vector { return u; };
  def.coordinates = [](const Vector& x) -> Vector { return x; };
  def.jac_phi = [m](const Vector&) -> Matrix { return Matrix::Identity(m, m); };
  def.jac_coordinates = [m](const Vector&) -> Matrix {
    return Matrix::Identity(m, m);
  };
  def.sampler = [m](std::mt19937_64& rng) -> Vector {
    Vector u(m);
    for (Eigen::Index i = 0; i < m; ++i) u[i] = uniform(rng, -1.0, 1.0);
    return u;
  };
  return LeafChart(std::move(def));
}

namespace {

struct LevelSetGeometry {
  std::vector<ScalarFunction> casimirs;
  Vector base;
  Vector levels;
  Matrix tangent;  // n x d, orthonormal
  Matrix normal;   // n x m, orthonormal

  Vector values(const Vector& x) const {
    Vector v(static_cast<Eigen::Index>(casimirs.size()));
    for (std::size_t i = 0; i < casimirs.size(); ++i) {
      v[static_cast<Eigen::Index>(i)] = casimirs[i](x);
    }
    return v;
  }

  Matrix differential(const Vector& x) const {
    Matrix dc(static_cast<Eigen::Index>(casimirs.size()), x.size());
    for (std::size_t i = 0; i < casimirs.size(); ++i) {
      dc.row(static_cast<Eigen::Index>(i)) = casimirs[i].gradient(x).transpose();
    }
    return dc;
  }

  Vector solve(const Vector& u) const {
    const Vector linear = base + tangent * u;
    Vector w = Vector::Zero(normal.cols());
    const double scale = 1.0 + levels.cwiseAbs().maxCoeff();
    for (int iter = 0; iter < 60; ++iter) {
      const Vector x = linear + normal * w;
      const Vector f = values(x) - levels;
      if (f.cwiseAbs().maxCoeff() <= 4e-16 * scale && iter > 0) return x;
      const Matrix jw = differential(x) * normal;
      const Vector step = jw.partialPivLu().solve(f);
      w -= step;
      if (!w.allFinite()) break;
      if (step.norm() <= 1e-16 * (1.0 + w.norm())) return linear + normal * w;
    }
    const Vector x = linear + normal * w;
    if (w.allFinite() &&
        (values(x) - levels).cwiseAbs().maxCoeff() <= 1e-12 * scale) {
      return x;
    }
    throw Error(ErrorCode::OutsideChartDomain,
                "level-set chart: Newton iteration did not converge");
  }
};

}  // namespace

LeafChart level_set(std::vector<ScalarFunction> casimirs,
                    const Vector& base_point, double radius) {
  auto geo = std::make_shared<LevelSetGeometry>();
  geo->casimirs = std::move(casimirs);
  geo->base = base_point;
  geo->levels = geo->values(base_point);
  const Matrix dc = geo->differential(base_point);
  const std::size_t m = geo->casimirs.size();
  if (numeric_rank(dc) != m) {
    throw Error(ErrorCode::InvalidArgument,
                "Casimir differentials are dependent at the base point");
  }
  geo->tangent = kernel_basis(dc);
  geo->normal = image_basis(dc.transpose());
  const auto n = static_cast<std::size_t>(base_point.size());
  const std::size_t d = n - m;

  LeafChart::Definition def;
  def.name = "level_set";
  def.ambient_dim = n;
  def.leaf_dim = d;
  def.phi = [geo](const Vector& u) -> Vector { return geo->solve(u); };
  def.coordinates = [geo](const Vector& x) -> Vector {
    return geo->tangent.transpose() * (x - geo->base);
  };
  def.jac_phi = [geo](const Vector& u) -> Matrix {
    const Vector x = geo->solve(u);
    const Matrix dc = geo->differential(x);
    const Matrix dw = -(dc * geo->normal).partialPivLu().solve(dc * geo->tangent);
    return geo->tangent + geo->normal * dw;
  };
  def.jac_coordinates = [geo](const Vector&) -> Matrix {
    return geo->tangent.transpose();
  };
  def.domain = [radius](const Vector& u) { return u.norm() < radius; };
  def.sampler = [radius, d](std::mt19937_64& rng) -> Vector {
    Vector u(static_cast<Eigen::Index>(d));
    do {
      for (Eigen::Index i = 0; i < u.size(); ++i) {
        u[i] = uniform(rng, -0.6 * radius, 0.6 * radius);
      }
    } while (u.norm() >= 0.6 * radius);
    return u;
  };
  return LeafChart(std::move(def));
}

}  // namespace dbracket::charts

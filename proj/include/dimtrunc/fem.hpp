#pragma once

// P1 conforming finite elements on the unit square with homogeneous
// Dirichlet data: mesh, assembly, Jacobi-preconditioned CG, norms.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dimtrunc/error.hpp"

namespace dimtrunc {

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
};

using Triangle = std::array<std::size_t, 3>;

/// Uniform triangulation of (0,1)^2 with m cells per side. Each cell is split
/// along its lower-left to upper-right diagonal. Vertex (i, j) sits at
/// (i h, j h) and has index i + j (m + 1).
class TriangularMesh {
public:
  explicit TriangularMesh(std::size_t m) : m_(m) {
    if (m == 0) throw ConfigError("mesh needs at least one subdivision per side");
    const std::size_t side = m + 1;
    const double h = 1.0 / static_cast<double>(m);
    vertices_.reserve(side * side);
    boundary_.reserve(side * side);
    interior_index_.assign(side * side, -1);
    for (std::size_t j = 0; j < side; ++j) {
      for (std::size_t i = 0; i < side; ++i) {
        // Exact endpoints: i == m must give 1.0, not m * (1/m).
        const double x1 = i == m ? 1.0 : static_cast<double>(i) * h;
        const double x2 = j == m ? 1.0 : static_cast<double>(j) * h;
        vertices_.push_back({x1, x2});
        const bool on_boundary = i == 0 || j == 0 || i == m || j == m;
        boundary_.push_back(on_boundary);
        if (!on_boundary) {
          interior_index_[vertices_.size() - 1] = static_cast<std::ptrdiff_t>(interior_.size());
          interior_.push_back(vertices_.size() - 1);
        }
      }
    }
    triangles_.reserve(2 * m * m);
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t v00 = i + j * side;
        const std::size_t v10 = v00 + 1;
        const std::size_t v01 = v00 + side;
        const std::size_t v11 = v01 + 1;
        triangles_.push_back({v00, v10, v11});
        triangles_.push_back({v00, v11, v01});
      }
    }
  }

  std::size_t subdivisions() const noexcept { return m_; }
  double h() const noexcept { return 1.0 / static_cast<double>(m_); }

  std::span<const Point> vertices() const noexcept { return vertices_; }
  std::span<const Triangle> triangles() const noexcept { return triangles_; }
  const std::vector<bool>& boundary_mask() const noexcept { return boundary_; }

  /// Interior vertices in increasing vertex order; the unknowns of the system.
  std::span<const std::size_t> interior_vertices() const noexcept { return interior_; }
  /// Position of a vertex among the unknowns, or -1 on the boundary.
  std::ptrdiff_t interior_index(std::size_t vertex) const { return interior_index_.at(vertex); }
  std::size_t interior_count() const noexcept { return interior_.size(); }

  double signed_area(const Triangle& t) const {
    const Point& a = vertices_[t[0]];
    const Point& b = vertices_[t[1]];
    const Point& c = vertices_[t[2]];
    return 0.5 * ((b.x1 - a.x1) * (c.x2 - a.x2) - (c.x1 - a.x1) * (b.x2 - a.x2));
  }

private:
  std::size_t m_;
  std::vector<Point> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<bool> boundary_;
  std::vector<std::ptrdiff_t> interior_index_;
  std::vector<std::size_t> interior_;
};

using MeshPtr = std::shared_ptr<const TriangularMesh>;

inline MeshPtr build_unit_square_mesh(std::size_t m) {
  return std::make_shared<const TriangularMesh>(m);
}

/// Symmetric triangle rules in barycentric coordinates; weights sum to one.
struct TriangleQuadrature {
  std::vector<std::array<double, 3>> barycentric;
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }

  /// order 1: centroid. order 2: edge midpoints (exact for quadratics).
  static TriangleQuadrature of_order(int order) {
    TriangleQuadrature q;
    switch (order) {
      case 1:
        q.barycentric = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
        q.weights = {1.0};
        break;
      case 2:
        q.barycentric = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
        q.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
        break;
      default:
        throw ConfigError("unsupported triangle quadrature order " + std::to_string(order) +
                          " (supported: 1, 2)");
    }
    return q;
  }

  Point map(const std::array<Point, 3>& corners, std::size_t q) const {
    const auto& l = barycentric[q];
    return {l[0] * corners[0].x1 + l[1] * corners[1].x1 + l[2] * corners[2].x1,
            l[0] * corners[0].x2 + l[1] * corners[1].x2 + l[2] * corners[2].x2};
  }
};

/// Gradients of the three barycentric coordinates on a triangle.
struct ElementGeometry {
  double area = 0.0;
  std::array<std::array<double, 2>, 3> grad{};

  static ElementGeometry of(const Point& a, const Point& b, const Point& c) {
    ElementGeometry g;
    const double det = (b.x1 - a.x1) * (c.x2 - a.x2) - (c.x1 - a.x1) * (b.x2 - a.x2);
    g.area = 0.5 * det;
    g.grad[0] = {(b.x2 - c.x2) / det, (c.x1 - b.x1) / det};
    g.grad[1] = {(c.x2 - a.x2) / det, (a.x1 - c.x1) / det};
    g.grad[2] = {(a.x2 - b.x2) / det, (b.x1 - a.x1) / det};
    return g;
  }

  double dot(std::size_t i, std::size_t j) const {
    return grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1];
  }
};

/// Element stiffness for a coefficient with the given element mean.
inline std::array<std::array<double, 3>, 3> local_stiffness(const Point& a, const Point& b,
                                                            const Point& c,
                                                            double mean_coefficient = 1.0) {
  const ElementGeometry g = ElementGeometry::of(a, b, c);
  std::array<std::array<double, 3>, 3> k{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) k[i][j] = mean_coefficient * g.area * g.dot(i, j);
  return k;
}

/// Compressed sparse row matrix with sorted column indices.
struct CsrMatrix {
  std::size_t rows = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::size_t> col;
  std::vector<double> val;

  void multiply(std::span<const double> x, std::span<double> y) const {
    for (std::size_t r = 0; r < rows; ++r) {
      double acc = 0.0;
      for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += val[k] * x[col[k]];
      y[r] = acc;
    }
  }

  /// Stored value at (r, c), or 0 when outside the pattern.
  double at(std::size_t r, std::size_t c) const {
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
      if (col[k] == c) return val[k];
    return 0.0;
  }

  std::vector<double> diagonal() const {
    std::vector<double> d(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) d[r] = at(r, r);
    return d;
  }
};

/// Stiffness matrix and load vector over the interior vertices.
struct LinearSystem {
  MeshPtr mesh;
  CsrMatrix matrix;
  std::vector<double> rhs;
};

/// Precomputed sparsity pattern and element-to-slot map. Reassembling for a
/// new coefficient only rescales and scatters the geometric element matrices,
/// so one assembler is shared by every parameter sample on a mesh.
class StiffnessAssembler {
public:
  StiffnessAssembler(MeshPtr mesh, int quad_order = 2)
      : mesh_(std::move(mesh)), quad_(TriangleQuadrature::of_order(quad_order)) {
    const auto tris = mesh_->triangles();
    const std::size_t n = mesh_->interior_count();
    std::vector<std::vector<std::size_t>> pattern(n);
    for (const Triangle& t : tris) {
      for (std::size_t a = 0; a < 3; ++a) {
        const auto ia = mesh_->interior_index(t[a]);
        if (ia < 0) continue;
        for (std::size_t b = 0; b < 3; ++b) {
          const auto ib = mesh_->interior_index(t[b]);
          if (ib >= 0) pattern[ia].push_back(static_cast<std::size_t>(ib));
        }
      }
    }
    pattern_.rows = n;
    pattern_.row_ptr.assign(n + 1, 0);
    for (std::size_t r = 0; r < n; ++r) {
      auto& p = pattern[r];
      std::sort(p.begin(), p.end());
      p.erase(std::unique(p.begin(), p.end()), p.end());
      pattern_.row_ptr[r + 1] = pattern_.row_ptr[r] + p.size();
      pattern_.col.insert(pattern_.col.end(), p.begin(), p.end());
    }
    pattern_.val.assign(pattern_.col.size(), 0.0);

    geometry_.reserve(tris.size());
    slots_.reserve(tris.size());
    quad_points_.reserve(tris.size() * quad_.size());
    for (const Triangle& t : tris) {
      const std::array<Point, 3> corners{mesh_->vertices()[t[0]], mesh_->vertices()[t[1]],
                                         mesh_->vertices()[t[2]]};
      geometry_.push_back(ElementGeometry::of(corners[0], corners[1], corners[2]));
      for (std::size_t q = 0; q < quad_.size(); ++q) quad_points_.push_back(quad_.map(corners, q));
      std::array<std::ptrdiff_t, 9> slot{};
      for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = 0; b < 3; ++b) {
          const auto ia = mesh_->interior_index(t[a]);
          const auto ib = mesh_->interior_index(t[b]);
          slot[3 * a + b] = (ia < 0 || ib < 0) ? -1 : find_slot(ia, ib);
        }
      }
      slots_.push_back(slot);
    }
  }

  const MeshPtr& mesh() const noexcept { return mesh_; }
  const TriangleQuadrature& quadrature() const noexcept { return quad_; }

  /// Physical quadrature points, element-major: element e owns entries
  /// [e * Q, (e + 1) * Q).
  std::span<const Point> quadrature_points() const noexcept { return quad_points_; }

  /// Load vector for a source sampled at the quadrature points.
  std::vector<double> load(std::span<const double> source_at_points) const {
    std::vector<double> f(mesh_->interior_count(), 0.0);
    const auto tris = mesh_->triangles();
    const std::size_t nq = quad_.size();
    for (std::size_t e = 0; e < tris.size(); ++e) {
      for (std::size_t a = 0; a < 3; ++a) {
        const auto ia = mesh_->interior_index(tris[e][a]);
        if (ia < 0) continue;
        double acc = 0.0;
        for (std::size_t q = 0; q < nq; ++q)
          acc += quad_.weights[q] * source_at_points[e * nq + q] * quad_.barycentric[q][a];
        f[ia] += geometry_[e].area * acc;
      }
    }
    return f;
  }

  /// Stiffness matrix for a coefficient sampled at the quadrature points.
  /// Throws CoercivityError on a nonpositive sample.
  void stiffness(std::span<const double> coeff_at_points, CsrMatrix& out) const {
    if (out.rows != pattern_.rows || out.val.size() != pattern_.val.size()) out = pattern_;
    std::fill(out.val.begin(), out.val.end(), 0.0);
    const std::size_t nq = quad_.size();
    for (std::size_t e = 0; e < geometry_.size(); ++e) {
      double mean = 0.0;
      for (std::size_t q = 0; q < nq; ++q) {
        const double a = coeff_at_points[e * nq + q];
        if (!(a > 0.0)) {
          const Point& x = quad_points_[e * nq + q];
          throw CoercivityError("diffusion coefficient " + std::to_string(a) + " at (" +
                                std::to_string(x.x1) + ", " + std::to_string(x.x2) +
                                ") is not positive");
        }
        mean += quad_.weights[q] * a;
      }
      const ElementGeometry& g = geometry_[e];
      const double scale = mean * g.area;
      const auto& slot = slots_[e];
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
          if (slot[3 * a + b] >= 0) out.val[slot[3 * a + b]] += scale * g.dot(a, b);
    }
  }

  CsrMatrix stiffness(std::span<const double> coeff_at_points) const {
    CsrMatrix m = pattern_;
    stiffness(coeff_at_points, m);
    return m;
  }

private:
  std::ptrdiff_t find_slot(std::ptrdiff_t r, std::ptrdiff_t c) const {
    for (std::size_t k = pattern_.row_ptr[r]; k < pattern_.row_ptr[r + 1]; ++k)
      if (pattern_.col[k] == static_cast<std::size_t>(c)) return static_cast<std::ptrdiff_t>(k);
    return -1;
  }

  MeshPtr mesh_;
  TriangleQuadrature quad_;
  CsrMatrix pattern_;
  std::vector<ElementGeometry> geometry_;
  std::vector<std::array<std::ptrdiff_t, 9>> slots_;
  std::vector<Point> quad_points_;
};

using ScalarField = std::function<double(const Point&)>;

/// Dirichlet-eliminated Galerkin system for -div(a grad u) = f.
inline LinearSystem assemble_system(const MeshPtr& mesh, const ScalarField& coeff,
                                    const ScalarField& source, int quad_order = 2) {
  StiffnessAssembler assembler(mesh, quad_order);
  const auto pts = assembler.quadrature_points();
  std::vector<double> a(pts.size()), f(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    a[i] = coeff(pts[i]);
    f[i] = source(pts[i]);
  }
  return {mesh, assembler.stiffness(a), assembler.load(f)};
}

struct SolverOptions {
  double rtol = 1e-10;
  /// 0 selects 10 times the number of unknowns.
  std::size_t max_iterations = 0;
};

struct SolveStats {
  std::size_t iterations = 0;
  double residual = 0.0;  // final ||b - A x||_2
};

namespace detail {
inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
}  // namespace detail

/// Jacobi-preconditioned conjugate gradient. x holds the initial guess on
/// entry. Stops once the true residual satisfies ||b - A x|| <= rtol ||b||.
inline SolveStats conjugate_gradient(const CsrMatrix& a, std::span<const double> b,
                                     std::span<double> x, const SolverOptions& opts = {}) {
  const std::size_t n = a.rows;
  const std::size_t cap = opts.max_iterations ? opts.max_iterations : 10 * n;
  const double bnorm = std::sqrt(detail::dot(b, b));
  SolveStats stats;
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return stats;
  }
  const double target = opts.rtol * bnorm;
  std::vector<double> inv_diag = a.diagonal();
  for (double& d : inv_diag) d = 1.0 / d;

  std::vector<double> r(n), z(n), p(n), ap(n);
  auto true_residual = [&] {
    a.multiply(x, ap);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
    return std::sqrt(detail::dot(r, r));
  };

  double rnorm = true_residual();
  while (rnorm > target) {
    // (Re)start from the true residual.
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] = inv_diag[i] * r[i];
    double rz = detail::dot(r, z);
    while (rnorm > target && stats.iterations < cap) {
      a.multiply(p, ap);
      const double alpha = rz / detail::dot(p, ap);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * ap[i];
      }
      rnorm = std::sqrt(detail::dot(r, r));
      ++stats.iterations;
      for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
      const double rz_next = detail::dot(r, z);
      const double beta = rz_next / rz;
      rz = rz_next;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    rnorm = true_residual();
    if (rnorm > target && stats.iterations >= cap) {
      throw ConvergenceError("conjugate gradient did not converge in " + std::to_string(cap) +
                                 " iterations (residual " + std::to_string(rnorm) + ")",
                             rnorm);
    }
  }
  stats.residual = rnorm;
  return stats;
}

/// Piecewise-linear function given by its values at every mesh vertex.
struct FemSolution {
  MeshPtr mesh;
  std::vector<double> values;
};

/// Scatter interior unknowns into a full nodal vector with zero boundary.
inline FemSolution expand_interior(const MeshPtr& mesh, std::span<const double> interior) {
  FemSolution u{mesh, std::vector<double>(mesh->vertices().size(), 0.0)};
  const auto iv = mesh->interior_vertices();
  for (std::size_t k = 0; k < iv.size(); ++k) u.values[iv[k]] = interior[k];
  return u;
}

inline FemSolution solve(const LinearSystem& system, const SolverOptions& opts = {},
                         SolveStats* stats = nullptr) {
  std::vector<double> x(system.rhs.size(), 0.0);
  const SolveStats s = conjugate_gradient(system.matrix, system.rhs, x, opts);
  if (stats) *stats = s;
  return expand_interior(system.mesh, x);
}

/// Nodal interpolant; boundary values are kept unless zero_boundary is set.
inline FemSolution interpolate(const MeshPtr& mesh, const ScalarField& fn,
                               bool zero_boundary = false) {
  FemSolution u{mesh, {}};
  u.values.reserve(mesh->vertices().size());
  const auto& mask = mesh->boundary_mask();
  for (std::size_t v = 0; v < mesh->vertices().size(); ++v)
    u.values.push_back(zero_boundary && mask[v] ? 0.0 : fn(mesh->vertices()[v]));
  return u;
}

enum class Norm { L2, H10 };

inline const char* to_string(Norm n) { return n == Norm::L2 ? "L2" : "H10"; }

inline Norm norm_from_string(const std::string& s) {
  if (s == "L2") return Norm::L2;
  if (s == "H10") return Norm::H10;
  throw ConfigError("unknown norm '" + s + "' (expected L2 or H10)");
}

namespace detail {

inline void require_same_mesh(const FemSolution& u, const FemSolution& v) {
  if (!u.mesh || !v.mesh) throw ConfigError("finite element function without a mesh");
  if (u.mesh != v.mesh && u.mesh->subdivisions() != v.mesh->subdivisions())
    throw ConfigError("finite element functions live on different meshes");
}

/// Element-exact integral of the squared field (L2) or squared gradient
/// (H10) of the piecewise-linear function with nodal values w(v).
template <class Nodal>
double squared_norm(const TriangularMesh& mesh, Norm which, Nodal w) {
  double total = 0.0;
  for (const Triangle& t : mesh.triangles()) {
    const double u0 = w(t[0]), u1 = w(t[1]), u2 = w(t[2]);
    if (which == Norm::L2) {
      // u^T M u with M = area / 12 [[2,1,1],[1,2,1],[1,1,2]]
      const double sum = u0 + u1 + u2;
      total += mesh.signed_area(t) / 12.0 * (u0 * u0 + u1 * u1 + u2 * u2 + sum * sum);
    } else {
      const auto& v = mesh.vertices();
      const ElementGeometry g = ElementGeometry::of(v[t[0]], v[t[1]], v[t[2]]);
      const double gx = u0 * g.grad[0][0] + u1 * g.grad[1][0] + u2 * g.grad[2][0];
      const double gy = u0 * g.grad[0][1] + u1 * g.grad[1][1] + u2 * g.grad[2][1];
      total += g.area * (gx * gx + gy * gy);
    }
  }
  return total;
}

}  // namespace detail

inline double squared_norm(const FemSolution& u, Norm which) {
  return detail::squared_norm(*u.mesh, which, [&](std::size_t v) { return u.values[v]; });
}

inline double l2_norm(const FemSolution& u) { return std::sqrt(squared_norm(u, Norm::L2)); }

inline double h10_seminorm(const FemSolution& u) { return std::sqrt(squared_norm(u, Norm::H10)); }

inline double squared_diff_norm(const FemSolution& u, const FemSolution& v, Norm which) {
  detail::require_same_mesh(u, v);
  return detail::squared_norm(*u.mesh, which,
                              [&](std::size_t k) { return u.values[k] - v.values[k]; });
}

inline double diff_norm(const FemSolution& u, const FemSolution& v, Norm which) {
  return std::sqrt(squared_diff_norm(u, v, which));
}

/// Squared energy norm: the integral of |grad u|^2 over the domain.
inline double qoi_nl(const FemSolution& u) { return squared_norm(u, Norm::H10); }

}  // namespace dimtrunc

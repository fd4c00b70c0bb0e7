// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#include "fom.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "matrix_market.hpp"

namespace boxmor {

namespace fs = std::filesystem;
using json = nlohmann::json;

double LoadSignal::operator()(double t) const {
  switch (kind) {
    case Kind::Step:
      return t >= 0.0 ? amplitude : 0.0;
    case Kind::Ramp:
      if (rise_time <= 0.0) return t >= 0.0 ? amplitude : 0.0;
      return amplitude * std::clamp(t / rise_time, 0.0, 1.0);
    case Kind::Sine:
      return amplitude * std::sin(2.0 * std::numbers::pi * frequency * t);
  }
  return 0.0;
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void add_block(Triplets& out, const Eigen::MatrixXd& block,
               const std::vector<int>& dofs) {
  for (int i = 0; i < block.rows(); ++i)
    for (int j = 0; j < block.cols(); ++j)
      if (block(i, j) != 0.0) out.emplace_back(dofs[i], dofs[j], block(i, j));
}

// 4x4 bending blocks for DoFs (w1, t1, w2, t2) in the theta = +w' sign
// convention; conjugate with diag(1,-1,1,-1) for the theta = -w' plane.
Eigen::MatrixXd bending_stiffness(double ei, double L, double phi) {
  const double f = ei / ((1.0 + phi) * L * L * L);
  Eigen::MatrixXd k(4, 4);
  const double L2 = L * L;
  k << 12, 6 * L, -12, 6 * L,                                  //
      6 * L, (4 + phi) * L2, -6 * L, (2 - phi) * L2,           //
      -12, -6 * L, 12, -6 * L,                                 //
      6 * L, (2 - phi) * L2, -6 * L, (4 + phi) * L2;
  return f * k;
}

Eigen::MatrixXd bending_mass(double rho_a, double rho_i, double L, double phi) {
  const double L2 = L * L;
  // Translational inertia of the shear-deformable shape functions.
  const double a = 13.0 / 35 + 7 * phi / 10 + phi * phi / 3;
  const double b = (11.0 / 210 + 11 * phi / 120 + phi * phi / 24) * L;
  const double c = 9.0 / 70 + 3 * phi / 10 + phi * phi / 6;
  const double d = (13.0 / 420 + 3 * phi / 40 + phi * phi / 24) * L;
  const double e = (1.0 / 105 + phi / 60 + phi * phi / 120) * L2;
  const double g = (1.0 / 140 + phi / 60 + phi * phi / 120) * L2;
  Eigen::MatrixXd mt(4, 4);
  mt << a, b, c, -d,   //
      b, e, d, -g,     //
      c, d, a, -b,     //
      -d, -g, -b, e;
  // Rotary inertia.
  const double ra = 6.0 / 5;
  const double rb = (1.0 / 10 - phi / 2) * L;
  const double rc = (2.0 / 15 + phi / 6 + phi * phi / 3) * L2;
  const double rd = (1.0 / 30 + phi / 6 - phi * phi / 6) * L2;
  Eigen::MatrixXd mr(4, 4);
  mr << ra, rb, -ra, rb,  //
      rb, rc, -rb, -rd,   //
      -ra, -rb, ra, -rb,  //
      rb, -rd, -rb, rc;
  const double s = 1.0 / ((1.0 + phi) * (1.0 + phi));
  return s * (rho_a * L * mt + rho_i / L * mr);
}

Eigen::MatrixXd flip_rotation_sign(const Eigen::MatrixXd& m4) {
  Eigen::Vector4d s(1, -1, 1, -1);
  return s.asDiagonal() * m4 * s.asDiagonal();
}

// Torsion constant of a rectangle (Roark), a >= b.
double rect_torsion_constant(double a, double b) {
  if (a < b) std::swap(a, b);
  const double r = b / a;
  return a * b * b * b *
         (1.0 / 3 - 0.21 * r * (1.0 - r * r * r * r / 12.0));
}

void validate_beam(const BeamSpec& s) {
  if (s.elements < 1) throw ConfigError("beam needs at least one element");
  if (!(s.length > 0) || !(s.thickness > 0) || !(s.height > 0))
    throw ConfigError("beam dimensions must be positive");
  if (!(s.density > 0) || !(s.youngs_modulus > 0))
    throw ConfigError("beam density and Young's modulus must be positive");
  if (s.poisson < 0.0 || s.poisson >= 0.5)
    throw ConfigError("beam Poisson ratio must lie in [0, 0.5)");
}

// Assembles free-free (M, K_conventional) triplets for the 6-DoF/node beam.
void assemble_beam(const BeamSpec& s, Triplets& mass, Triplets& stiff) {
  const double L = s.length / s.elements;
  const double area = s.thickness * s.height;
  const double iy = s.thickness * std::pow(s.height, 3) / 12.0;  // z bending
  const double iz = s.height * std::pow(s.thickness, 3) / 12.0;  // y bending
  const double ip = iy + iz;
  const double gmod = s.youngs_modulus / (2.0 * (1.0 + s.poisson));
  const double jt = rect_torsion_constant(s.thickness, s.height);
  // Shear correction factor for a rectangular section.
  const double kappa = 10.0 * (1.0 + s.poisson) / (12.0 + 11.0 * s.poisson);
  const double phi_y = 12.0 * s.youngs_modulus * iz / (gmod * kappa * area * L * L);
  const double phi_z = 12.0 * s.youngs_modulus * iy / (gmod * kappa * area * L * L);

  const double ea = s.youngs_modulus * area / L;
  const double gj = gmod * jt / L;
  Eigen::Matrix2d pair_k, pair_m;
  pair_k << 1, -1, -1, 1;
  pair_m << 2, 1, 1, 2;

  const Eigen::MatrixXd k_xy = bending_stiffness(s.youngs_modulus * iz, L, phi_y);
  const Eigen::MatrixXd m_xy = bending_mass(s.density * area, s.density * iz, L, phi_y);
  // In the x-z plane the rotation DoF is ry = -w', so conjugate the signs.
  const Eigen::MatrixXd k_xz =
      flip_rotation_sign(bending_stiffness(s.youngs_modulus * iy, L, phi_z));
  const Eigen::MatrixXd m_xz =
      flip_rotation_sign(bending_mass(s.density * area, s.density * iy, L, phi_z));

  for (int e = 0; e < s.elements; ++e) {
    const int n1 = 6 * e, n2 = 6 * (e + 1);
    const std::vector<int> axial{n1 + 0, n2 + 0};
    const std::vector<int> torsion{n1 + 3, n2 + 3};
    const std::vector<int> bend_xy{n1 + 1, n1 + 5, n2 + 1, n2 + 5};
    const std::vector<int> bend_xz{n1 + 2, n1 + 4, n2 + 2, n2 + 4};

    add_block(stiff, ea * pair_k, axial);
    add_block(mass, s.density * area * L / 6.0 * pair_m, axial);
    add_block(stiff, gj * pair_k, torsion);
    add_block(mass, s.density * ip * L / 6.0 * pair_m, torsion);
    add_block(stiff, k_xy, bend_xy);
    add_block(mass, m_xy, bend_xy);
    add_block(stiff, k_xz, bend_xz);
    add_block(mass, m_xz, bend_xz);
  }
}

}  // namespace

SparseSystem build_timoshenko_beam(const BeamSpec& spec) {
  validate_beam(spec);
  Triplets mass, stiff;
  assemble_beam(spec, mass, stiff);

  // Clamp node 0: drop its six DoFs and shift the rest down.
  const int n = 6 * spec.elements;
  auto clamped = [](Triplets& in) {
    Triplets out;
    out.reserve(in.size());
    for (const auto& t : in)
      if (t.row() >= 6 && t.col() >= 6)
        out.emplace_back(t.row() - 6, t.col() - 6, t.value());
    return out;
  };
  Triplets mass_c = clamped(mass), stiff_c = clamped(stiff);

  SparseSystem sys;
  sys.kind = SystemKind::SecondOrder;
  sys.E.resize(n, n);
  sys.E.setFromTriplets(mass_c.begin(), mass_c.end());
  SpMat k_std(n, n);
  k_std.setFromTriplets(stiff_c.begin(), stiff_c.end());
  sys.A = (-k_std).eval();  // E u'' = A u + f places -K_conventional in A
  sys.E.makeCompressed();
  sys.A.makeCompressed();

  const int tip = beam_tip_transverse_dof(spec);
  sys.f = Eigen::VectorXd::Zero(n);
  sys.f[tip] = 1.0;  // unit transverse tip force
  sys.D.resize(1, n);
  sys.D.insert(0, tip) = 1.0;
  sys.D.makeCompressed();
  return sys;
}

int beam_tip_transverse_dof(const BeamSpec& spec) {
  return 6 * (spec.elements - 1) + 2;
}

std::pair<SpMat, SpMat> beam_matrices_unclamped(const BeamSpec& spec) {
  validate_beam(spec);
  Triplets mass, stiff;
  assemble_beam(spec, mass, stiff);
  const int n = 6 * (spec.elements + 1);
  SpMat m(n, n), k_std(n, n);
  m.setFromTriplets(mass.begin(), mass.end());
  k_std.setFromTriplets(stiff.begin(), stiff.end());
  m.makeCompressed();
  SpMat a = (-k_std).eval();
  return {m, a};
}

namespace {

std::vector<int> paint_bodies(const LatticeSpec& s) {
  std::vector<int> body(static_cast<std::size_t>(s.nx) * s.ny * s.nz, 0);
  for (const auto& b : s.bodies) {
    if (b.id < 0) throw ConfigError("lattice body id must be non-negative");
    for (int d = 0; d < 3; ++d)
      if (b.from[d] < 0 || b.to[d] > (d == 0 ? s.nx : d == 1 ? s.ny : s.nz) ||
          b.from[d] >= b.to[d])
        throw ConfigError("lattice body box out of range or empty");
    for (int iz = b.from[2]; iz < b.to[2]; ++iz)
      for (int iy = b.from[1]; iy < b.to[1]; ++iy)
        for (int ix = b.from[0]; ix < b.to[0]; ++ix)
          body[ix + static_cast<std::size_t>(s.nx) * (iy + static_cast<std::size_t>(s.ny) * iz)] = b.id;
  }
  return body;
}

void validate_lattice(const LatticeSpec& s, const std::vector<int>& body) {
  if (s.nx < 1 || s.ny < 1 || s.nz < 1)
    throw ConfigError("lattice dimensions must be positive");
  if (!(s.cell_size > 0)) throw ConfigError("lattice cell size must be positive");
  if (s.convection < 0) throw ConfigError("convection coefficient must be non-negative");
  const int max_id = *std::max_element(body.begin(), body.end());
  if (static_cast<int>(s.conductivity.size()) <= max_id ||
      static_cast<int>(s.capacity.size()) <= max_id)
    throw ConfigError("lattice conductivity/capacity must cover every body id");
  for (int id = 0; id <= max_id; ++id) {
    if (!(s.conductivity[id] > 0))
      throw ConfigError("conductivity of body " + std::to_string(id) +
                        " must be positive");
    if (!(s.capacity[id] > 0))
      throw ConfigError("capacity of body " + std::to_string(id) +
                        " must be positive");
  }
}

}  // namespace

SparseSystem build_heat_lattice(const LatticeSpec& spec) {
  const std::vector<int> body = paint_bodies(spec);
  validate_lattice(spec, body);

  const int nx = spec.nx, ny = spec.ny, nz = spec.nz;
  const auto n = static_cast<Eigen::Index>(body.size());
  const double h = spec.cell_size;
  const double face = h * h;
  const double vol = face * h;
  auto cell = [&](int ix, int iy, int iz) {
    return ix + static_cast<Eigen::Index>(nx) * (iy + static_cast<Eigen::Index>(ny) * iz);
  };

  Triplets lap;  // conduction + convection operator L; A = -L
  lap.reserve(static_cast<std::size_t>(7) * n);
  auto couple = [&](Eigen::Index i, Eigen::Index j) {
    const double ki = spec.conductivity[body[i]];
    const double kj = spec.conductivity[body[j]];
    // Harmonic interface conductance of the two half cells.
    const double g = face / (0.5 * h / ki + 0.5 * h / kj);
    lap.emplace_back(i, i, g);
    lap.emplace_back(j, j, g);
    lap.emplace_back(i, j, -g);
    lap.emplace_back(j, i, -g);
  };

  for (int iz = 0; iz < nz; ++iz)
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        const Eigen::Index c = cell(ix, iy, iz);
        if (ix + 1 < nx) couple(c, cell(ix + 1, iy, iz));
        if (iy + 1 < ny) couple(c, cell(ix, iy + 1, iz));
        if (iz + 1 < nz) couple(c, cell(ix, iy, iz + 1));
        if (iz == 0 && spec.convection > 0)
          lap.emplace_back(c, c, spec.convection * face);
      }

  SparseSystem sys;
  sys.kind = SystemKind::FirstOrder;
  SpMat lmat(n, n);
  lmat.setFromTriplets(lap.begin(), lap.end());
  lmat.makeCompressed();
  sys.A = (-lmat).eval();

  Triplets cap;
  cap.reserve(n);
  for (Eigen::Index i = 0; i < n; ++i)
    cap.emplace_back(i, i, spec.capacity[body[i]] * vol);
  sys.E.resize(n, n);
  sys.E.setFromTriplets(cap.begin(), cap.end());
  sys.E.makeCompressed();

  std::vector<Eigen::Index> heated;
  for (Eigen::Index i = 0; i < n; ++i)
    if (body[i] == spec.heated_body) heated.push_back(i);
  if (heated.empty())
    throw ConfigError("heated body " + std::to_string(spec.heated_body) +
                      " has no cells");

  sys.f = Eigen::VectorXd::Zero(n);
  sys.D.resize(1, n);
  const double share = 1.0 / static_cast<double>(heated.size());
  for (const auto i : heated) {
    sys.f[i] = share;  // unit total power
    sys.D.insert(0, i) = share;  // mean heated-cell temperature
  }
  sys.D.makeCompressed();
  return sys;
}

std::vector<int> lattice_body_cells(const LatticeSpec& spec, int target) {
  const std::vector<int> body = paint_bodies(spec);
  std::vector<int> cells;
  for (std::size_t i = 0; i < body.size(); ++i)
    if (body[i] == target) cells.push_back(static_cast<int>(i));
  return cells;
}

void export_system(const SparseSystem& system, const std::string& dir,
                   const std::vector<std::string>& param_names,
                   const ParameterPoint& param_values) {
  fs::create_directories(dir);
  const bool second = system.kind == SystemKind::SecondOrder;
  const std::string e_name = second ? "M.mtx" : "E.mtx";
  const std::string a_name = second ? "K.mtx" : "A.mtx";
  write_matrix_market(dir + "/" + e_name, system.E);
  write_matrix_market(dir + "/" + a_name, system.A);
  write_matrix_market(dir + "/f.mtx", system.f);
  write_matrix_market(dir + "/D.mtx", system.D);

  json manifest;
  manifest["kind"] = second ? "second_order" : "first_order";
  manifest["n"] = system.n();
  manifest["m"] = system.m();
  manifest["files"] = {{"E", e_name}, {"A", a_name}, {"f", "f.mtx"}, {"D", "D.mtx"}};
  if (!param_names.empty()) {
    manifest["param_names"] = param_names;
    manifest["param_values"] = std::vector<double>(
        param_values.data(), param_values.data() + param_values.size());
  }
  std::ofstream out(dir + "/manifest.json");
  if (!out) throw ConfigError("cannot write '" + dir + "/manifest.json'");
  out << manifest.dump(2) << '\n';
}

SparseSystem import_system(const std::string& dir) {
  const std::string path = dir + "/manifest.json";
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }

  SparseSystem sys;
  const std::string kind = manifest.value("kind", "");
  if (kind == "first_order")
    sys.kind = SystemKind::FirstOrder;
  else if (kind == "second_order")
    sys.kind = SystemKind::SecondOrder;
  else
    throw ConfigError(path + ": unknown system kind '" + kind + "'");

  if (!manifest.contains("files") || !manifest["files"].is_object())
    throw ConfigError(path + ": missing files table");
  const auto& files = manifest["files"];
  auto file_of = [&](const char* role) {
    if (!files.contains(role))
      throw ConfigError(path + ": missing file entry for '" +
                        std::string(role) + "'" +
                        (std::string(role) == "f" ? "; load vector required" : ""));
    return dir + "/" + files[role].get<std::string>();
  };

  sys.E = read_sparse_matrix_market(file_of("E"));
  sys.A = read_sparse_matrix_market(file_of("A"));
  sys.f = read_vector_matrix_market(file_of("f"));
  sys.D = read_sparse_matrix_market(file_of("D"));

  const auto n = manifest.value("n", static_cast<Eigen::Index>(0));
  if (sys.E.rows() != n || sys.E.cols() != n || sys.A.rows() != n ||
      sys.A.cols() != n || sys.f.size() != n || sys.D.cols() != n)
    throw ConfigError(path + ": matrix dimensions disagree with manifest n=" +
                      std::to_string(n));
  return sys;
}

}  // namespace boxmor

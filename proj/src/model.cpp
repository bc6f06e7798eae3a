// Copyright 2026 The chiralsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chiral/model.hpp"

#include "chiral/hilbert.hpp"

#include <cmath>

namespace chiral {

double vdw_interaction(double r_um, double c6) {
  if (!(r_um > 0.0)) throw std::invalid_argument("interatomic distance must be positive");
  return std::abs(c6) * 1000.0 / std::pow(r_um, 6);
}

Geometry Geometry::from_positions(std::vector<Eigen::Vector3d> positions, double c6) {
  Geometry g;
  g.c6 = std::abs(c6);
  const auto n = static_cast<Eigen::Index>(positions.size());
  g.interactions = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double r = (positions[static_cast<std::size_t>(i)] -
                        positions[static_cast<std::size_t>(j)]).norm();
      g.interactions(i, j) = g.interactions(j, i) = vdw_interaction(r, c6);
    }
  }
  g.positions = std::move(positions);
  return g;
}

Geometry Geometry::uniform(int n_atoms, double u) {
  Geometry g;
  g.interactions = Eigen::MatrixXd::Constant(n_atoms, n_atoms, u);
  g.interactions.diagonal().setZero();
  return g;
}

void ModelConfig::validate() const {
  hilbert_dim(n_atoms);
  if (static_cast<int>(site_lasers.size()) != n_atoms) {
    throw ConfigError("site laser assignment must cover all " + std::to_string(n_atoms) +
                      " sites exactly once");
  }
  const int n_local = static_cast<int>(local_drives.size());
  for (const SiteLasers& s : site_lasers) {
    for (int k : {s.alpha_drive, s.beta_drive}) {
      if (k < -1 || k >= n_local) throw ConfigError("site laser refers to a missing local drive");
    }
  }
  for (const LocalDrive& d : local_drives) {
    if (d.amplitude < 0.0) throw ConfigError("local drive amplitude must be non-negative");
  }
  for (const GlobalDrive& d : global_drives) {
    if (d.amplitude < 0.0) throw ConfigError("global drive amplitude must be non-negative");
  }
  if (decay.gamma < 0.0 || decay.gamma_dephase < 0.0) {
    throw ConfigError("decay rates must be non-negative");
  }
  const Eigen::MatrixXd& u = geometry.interactions;
  if (u.rows() != n_atoms || u.cols() != n_atoms) {
    throw ConfigError("interaction matrix does not match the atom count");
  }
  if ((u - u.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ConfigError("interaction matrix must be symmetric");
  }
}

std::vector<SiteLasers> ring_assignment(int n_atoms) {
  std::vector<SiteLasers> out(static_cast<std::size_t>(n_atoms));
  for (int j = 0; j < n_atoms; ++j) {
    out[static_cast<std::size_t>(j)] = {j, (j + 1) % n_atoms};
  }
  return out;
}

bool is_ring_triangle(const ModelConfig& config) {
  if (config.n_atoms != 3 || config.local_drives.size() != 3 ||
      config.global_drives.size() != 1 || config.site_lasers.size() != 3) {
    return false;
  }
  const auto ring = ring_assignment(3);
  for (std::size_t j = 0; j < 3; ++j) {
    if (config.site_lasers[j].alpha_drive != ring[j].alpha_drive ||
        config.site_lasers[j].beta_drive != ring[j].beta_drive) {
      return false;
    }
  }
  return true;
}

std::vector<Eigen::Vector3d> triangle_positions(double r_um) {
  return {Eigen::Vector3d(0.0, 0.0, 0.0), Eigen::Vector3d(r_um, 0.0, 0.0),
          Eigen::Vector3d(0.5 * r_um, 0.5 * std::sqrt(3.0) * r_um, 0.0)};
}

}  // namespace chiral

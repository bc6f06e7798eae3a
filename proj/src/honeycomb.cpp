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

#include "chiral/hamiltonians.hpp"

#include <cmath>

namespace chiral {

namespace {

const char* const kSiteNames[6] = {"A1", "A2", "A3", "B1", "B2", "B3"};

// Angular slot (multiples of 60 degrees) of each site around the hexagon.
// Walking the ring gives A1, B2, A3, B1, A2, B3, so every nearest-neighbour
// pair shares one drive on the same (alpha or beta) component.
constexpr int kSlot[6] = {0, 4, 2, 3, 1, 5};

struct Component {
  bool present = false;
  double phase = 0.0;
};

Component component_for(const ModelConfig& config, int site, int drive) {
  const SiteLasers& s = config.site_lasers[static_cast<std::size_t>(site)];
  const LocalDrive& d = config.local_drives[static_cast<std::size_t>(drive)];
  if (s.alpha_drive == drive) return {true, d.alpha};
  if (s.beta_drive == drive) return {true, d.beta};
  return {};
}

}  // namespace

ModelConfig build_honeycomb_config(double r_nn_um, const HoneycombDrives& drives) {
  if (!(r_nn_um > 0.0)) throw ConfigError("nearest-neighbour spacing must be positive");
  if (drives.nnn.detuning == 0.0) throw PreconditionError("second global detuning is zero");
  const double ratio = drives.nn.detuning / drives.nnn.detuning;
  if (std::abs(ratio - 27.0) > 1e-9 * 27.0) {
    throw PreconditionError("global detuning ratio " + std::to_string(ratio) +
                            " does not match the hexagon interaction ratio 27");
  }

  ModelConfig c;
  c.n_atoms = 6;
  c.local_drives.assign(drives.local.begin(), drives.local.end());
  c.global_drives = {drives.nn, drives.nnn};
  // A sites: (α1, β2), (α2, β3), (α3, β1). B sites: (β1, α2), (β2, α3), (β3, α1).
  c.site_lasers = {{0, 1}, {1, 2}, {2, 0}, {1, 0}, {2, 1}, {0, 2}};

  std::vector<Eigen::Vector3d> pos(6);
  for (int s = 0; s < 6; ++s) {
    const double angle = kPi / 3.0 * kSlot[s];
    pos[static_cast<std::size_t>(s)] =
        Eigen::Vector3d(r_nn_um * std::cos(angle), r_nn_um * std::sin(angle), 0.0);
  }
  // A regular hexagon's side equals its circumradius.
  const double c6 = drives.nn.detuning * std::pow(r_nn_um, 6) / 1000.0;
  c.geometry = Geometry::from_positions(std::move(pos), c6);
  c.validate();
  return c;
}

std::vector<CouplingEntry> honeycomb_couplings(const ModelConfig& config) {
  config.validate();
  if (config.n_atoms != 6 || config.global_drives.size() != 2 ||
      config.geometry.positions.size() != 6) {
    throw PreconditionError("coupling table requires a six-site honeycomb config");
  }
  const auto& pos = config.geometry.positions;
  double r_nn = 1e300;
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      r_nn = std::min(r_nn, (pos[static_cast<std::size_t>(i)] - pos[static_cast<std::size_t>(j)]).norm());
    }
  }

  std::vector<CouplingEntry> table;
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      const double r = (pos[static_cast<std::size_t>(i)] - pos[static_cast<std::size_t>(j)]).norm();
      bool nearest = false;
      if (std::abs(r - r_nn) < 1e-9 * r_nn) {
        nearest = true;
      } else if (std::abs(r - std::sqrt(3.0) * r_nn) >= 1e-9 * r_nn) {
        continue;  // opposite corners are far from any resonance
      }
      const GlobalDrive& g = config.global_drives[nearest ? 0 : 1];
      for (int k = 0; k < static_cast<int>(config.local_drives.size()); ++k) {
        const Component ci = component_for(config, i, k);
        const Component cj = component_for(config, j, k);
        if (!ci.present || !cj.present) continue;
        const LocalDrive& d = config.local_drives[static_cast<std::size_t>(k)];
        CouplingEntry e;
        e.bond = std::string(kSiteNames[i]) + "-" + kSiteNames[j];
        e.drive = k + 1;
        e.nearest = nearest;
        try {
          e.j_mhz = coupling_J(k + 1, d.amplitude, d.detuning, g.amplitude, cj.phase, ci.phase);
        } catch (const SingularityError& err) {
          e.error = err.what();
        }
        table.push_back(e);
      }
    }
  }
  return table;
}

}  // namespace chiral

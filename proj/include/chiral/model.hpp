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

// model.hpp: configuration types shared by the Hamiltonian and dissipation
// builders.
//
// Frequencies are ordinary frequencies in MHz and times are in µs. Builders
// multiply by 2π when they produce operators, so operator entries are
// angular frequencies in rad/µs.

#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace chiral {

// A local g<->r laser pair. The same amplitude and detuning feed the alpha
// component on one site and the beta component on its neighbour.
struct LocalDrive {
  double amplitude = 0.0;  // MHz
  double alpha = 0.0;      // rad
  double beta = 0.0;       // rad
  double detuning = 0.0;   // MHz
};

// Global e<->r laser.
struct GlobalDrive {
  double amplitude = 0.0;  // MHz
  double detuning = 0.0;   // MHz
};

struct DecayRates {
  double gamma = 0.0;          // Rydberg decay, MHz, split evenly to g and e
  double gamma_dephase = 0.0;  // Rydberg dephasing, MHz
};

// Drive components seen by one site: indices into ModelConfig::local_drives,
// or -1 when the site carries no such component.
struct SiteLasers {
  int alpha_drive = -1;
  int beta_drive = -1;
};

struct Geometry {
  std::vector<Eigen::Vector3d> positions;  // µm
  double c6 = 0.0;                          // |C6| in GHz·µm^6
  Eigen::MatrixXd interactions;             // U_ij in MHz, zero diagonal

  static Geometry from_positions(std::vector<Eigen::Vector3d> positions, double c6);
  // All pairs share the same interaction; no positions recorded.
  static Geometry uniform(int n_atoms, double u);
};

struct ModelConfig {
  int n_atoms = 0;
  std::vector<LocalDrive> local_drives;
  std::vector<GlobalDrive> global_drives;
  Geometry geometry;
  DecayRates decay;
  std::vector<SiteLasers> site_lasers;
  // Adds a static |e><e| shift per atom that cancels the second-order light
  // shift of the single-excitation ground states.
  bool stark_compensation = false;
  // Allows the rotated-frame builder when U differs from the global detuning.
  bool allow_off_resonant_frame = false;

  // Throws ConfigError on inconsistent sizes, negative amplitudes or rates,
  // or drive indices out of range.
  void validate() const;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a perturbative denominator vanishes.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised when a builder's physical preconditions do not hold.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// |C6| * 1000 / R^6 in MHz for R in µm and C6 in GHz·µm^6.
double vdw_interaction(double r_um, double c6);

// Site j carries the alpha component of drive j and the beta component of
// drive j+1 (cyclic), the closed-ring assignment of the triangle.
std::vector<SiteLasers> ring_assignment(int n_atoms);
bool is_ring_triangle(const ModelConfig& config);

// Equilateral triangle of side r_um in the x-y plane.
std::vector<Eigen::Vector3d> triangle_positions(double r_um);

}  // namespace chiral

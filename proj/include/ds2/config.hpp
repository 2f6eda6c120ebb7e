#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ds2/current.hpp"
#include "ds2/kernels.hpp"
#include "ds2/testfn.hpp"

namespace ds2 {

// Run configuration. Flat "key = value" file, '#' starts a comment.
//
//   R               radius (default 1)
//   resolution      half | default | double
//   window_frac     tau window as a fraction of pi R / 2 (default 0.8)
//   delta_frac      distance kept from conformal infinity, same units (default 0.15)
//   eps_levels      comma separated epsilon ladder
//   basis_size      test functions in Gram studies (default 12)
//   fock_modes      one-particle dimension (default 6)
//   fock_particles  occupation cutoff (default 4)
//   convention      series | paper
//   kappa           derived | paper
//   out             output directory
//   seed            unsigned 64-bit seed
//   lambda_min, lambda_max, lambda_points   kernel scan grid
//   kernel_alpha    massless, or a real alpha in (0, 1/2]
struct RunConfig {
  double R = 1.0;
  std::string resolution = "default";
  double window_frac = 0.8;
  double delta_frac = 0.15;
  std::vector<double> eps_levels = default_eps_levels();
  int basis_size = 12;
  int fock_modes = 6;
  int fock_particles = 4;
  std::string convention = "series";
  std::string kappa = "derived";
  std::string out = "ds2_out";
  std::uint64_t seed = 20240611;
  double lambda_min = -0.99;
  double lambda_max = 3.0;
  int lambda_points = 80;
  std::string kernel_alpha = "massless";

  static RunConfig load(const std::string &path);
  void set(const std::string &key, const std::string &value);
  void validate() const;

  Resolution grid_resolution() const;
  GridSpec grid() const;
  KernelConvention kernel_convention() const;
  KappaConvention kappa_convention() const;

  // Ordered key/value view, used for echoing into outputs.
  std::map<std::string, std::string> entries() const;
  std::string to_text() const;
};

} // namespace ds2

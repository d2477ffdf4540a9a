#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "rso/config.hpp"
#include "rso/testfns.hpp"

namespace rso::harness {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCertificationFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitDiverged = 3;

// Verbosity from RSO_LOG: quiet < info < debug (default info).
int log_level();
void log_info(const std::string& line);

// --- reusable certification routines ---------------------------------------

struct SmoothnessCertification {
  int pairs_checked = 0;
  int violations = 0;
  double worst_ratio = 0.0;  // max lhs/rhs over pairs
  double fd_gradient_err = 0.0;
  bool hessian_ok = true;  // grid Hessian-norm test, when available
  bool certified = false;
};

SmoothnessCertification certify_smoothness(const Objective& f, int pairs,
                                           double box_lo, double box_hi,
                                           std::uint64_t seed);

struct HardInstanceCertification {
  SmoothnessCertification smoothness;  // includes cross-knot pairs
  double knot_discontinuity = 0.0;     // max |F' jump| over the seven knots
  double grid_min_value = 0.0;         // min F over the dense grid
  double value_at_zero = 0.0;
  bool certified = false;
};

HardInstanceCertification certify_hard_instance(const HardInstance& inst,
                                                int pairs, int grid_points,
                                                std::uint64_t seed);

// --- CLI-facing commands ----------------------------------------------------
// Each writes its artifacts under out_dir/<config-hash>/ and returns an exit
// code. Identical configs land in the same directory with identical bytes.

int cmd_run(const std::filesystem::path& config_path,
            const std::filesystem::path& out_dir,
            std::optional<std::uint64_t> seed_override);

int cmd_sweep(const std::filesystem::path& spec_path,
              const std::filesystem::path& out_dir, int jobs);

struct LowerBoundArgs {
  double eps = 0.1;
  double eta = 1.0;
  double alpha = 0.75;
  double delta1 = 1.0;
  double L0 = 8.0;
  double L1 = 1.0;
  MomentumRule rule = MomentumRule::last_gradient;
  long max_iterations = 10000000;
};

int cmd_certify_lower_bound(const LowerBoundArgs& args,
                            const std::filesystem::path& out_dir);

// Empty grid_path runs the default grids.
int cmd_verify_lemmas(const std::optional<std::filesystem::path>& grid_path,
                      const std::filesystem::path& out_dir);

int cmd_certify_smoothness(const std::filesystem::path& spec_path,
                           const std::filesystem::path& out_dir);

}  // namespace rso::harness

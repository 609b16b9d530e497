#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quermass/arc_kernel.hpp"
#include "quermass/configuration.hpp"
#include "quermass/params.hpp"
#include "quermass/rng.hpp"

namespace quermass {

struct ExplosionGuard : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class BoundaryKind { free_boundary, fixed_outside, periodic };

struct Boundary {
  BoundaryKind kind = BoundaryKind::free_boundary;
  /// fixed_outside: disks whose germs lie outside the window; only those
  /// within interaction reach (2*R1) of the window matter and are kept.
  std::vector<Disk> outside;
  std::vector<int> outside_types;

  static Boundary free() { return {}; }
  static Boundary fixed(std::vector<Disk> disks, std::vector<int> types = {});
  static Boundary torus() {
    Boundary b;
    b.kind = BoundaryKind::periodic;
    return b;
  }
};

enum class MoveKind { birth, death, translate };

const char* move_name(MoveKind m);

struct TraceRecord {
  long step = 0;
  long n_points = 0;
  double area = 0.0;
  double perimeter = 0.0;
  long euler = 0;
  long components = 0;
  long holes = 0;
  bool accepted = false;
  MoveKind move = MoveKind::birth;
  std::vector<long> per_type_counts;
};

struct ProposalMix {
  double p_birth = 0.4;
  double p_death = 0.4;
  double p_move = 0.2;
  /// Gaussian translate scale as a multiple of r0.
  double translate_scale = 0.5;
};

struct ChainOptions {
  long n_steps = 100000;
  long burn_in = -1;    // default: 20% of n_steps
  long thinning = -1;   // default: max(1, round(z * window area))
  ProposalMix mix;
  long cache_check_interval = 10000;
  double explosion_factor = 50.0;
};

/// One Metropolis-Hastings chain targeting the finite-volume Quermass density
/// z^n e^{-H} relative to the unit Poisson process on the window, with the
/// K-type cross-type hardcore when K > 1. Strictly single-writer.
class ChainState {
 public:
  ChainState(const QuermassParams& params, Rect window, Boundary boundary, int K,
             std::uint64_t seed, std::uint64_t stream = 0, ProposalMix mix = {});

  /// One MH step; fills a TraceRecord whose functionals are recomputed
  /// exactly (convenience/test entry; run_chain uses the fast path).
  TraceRecord propose_and_step();

  struct StepOutcome {
    MoveKind move;
    bool accepted = false;
    bool degenerate_rejection = false;
  };
  StepOutcome step();

  /// Unconditional insertion (initialization / tests); keeps caches in sync.
  /// Throws on cross-type hardcore violations.
  void insert(const Disk& p, int type = 0);

  const Configuration& config() const { return config_; }
  const std::vector<int>& types() const { return types_; }
  const QuermassParams& params() const { return params_; }
  const Rect& window() const { return window_; }
  int type_count() const { return K_; }
  long step_count() const { return step_; }

  /// Window-restricted functionals of the current state: plain functionals
  /// under a free boundary, F(omega ∪ outside) - F(outside) under
  /// fixed-outside, F(augmented) - F(ghosts) under periodic.
  Functionals current_functionals() const;

  /// Cached running functionals (tracked only when some theta is nonzero).
  std::optional<Functionals> cached_functionals() const;

  /// Verifies the cache against a recomputation (relative tolerance) and
  /// resynchronizes it; throws std::logic_error on disagreement.
  void check_cache(double rel_tol = 1e-7);

  /// log of the MH ratio (before min with 1) for a birth of (p, type) and for
  /// the death of point `index`; the detailed-balance identity
  /// log_acceptance_birth(p) + log_acceptance_death(index of p) == 0 is exact.
  double log_acceptance_birth(const Disk& p, int type = 0);
  double log_acceptance_death(int index);

  std::vector<long> per_type_counts() const;

  void set_explosion_factor(double factor) { explosion_factor_ = factor; }

 private:
  friend struct ChainTestAccess;

  struct EnergyDelta {
    double d_area = 0.0, d_perimeter = 0.0;
    long d_euler = 0;
    double energy = 0.0;
    bool hardcore = false;
  };

  EnergyDelta insertion_delta(const Disk& p, int type, int exclude_index);
  bool hardcore_violation(const Disk& p, int type, int exclude_index) const;
  void gather_environment(Vec2 where, double radius, int exclude_index,
                          std::vector<Disk>& disks) const;
  void apply_cache(const EnergyDelta& d, double sign);
  Functionals boundary_functionals() const;
  Vec2 reflect_into_window(Vec2 p) const;
  void build_periodic(Configuration& aug, Configuration& ghosts) const;
  double periodic_energy() const;

  QuermassParams params_;
  QuermassWeights weights_;
  Rect window_;
  Boundary boundary_;
  int K_ = 1;
  ProposalMix mix_;
  Rng rng_;
  Configuration config_;
  std::vector<int> types_;
  long step_ = 0;
  double explosion_factor_ = 50.0;

  bool track_cache_ = false;
  double cache_area_ = 0.0, cache_perimeter_ = 0.0;
  long cache_euler_ = 0;
  Functionals f_outside_;       // fixed-outside constant part
  bool have_f_outside_ = false;
  double periodic_energy_cache_ = 0.0;  // theta-weighted, periodic only
  bool have_periodic_energy_ = false;

  mutable std::vector<int> id_scratch_;
  mutable std::vector<Disk> env_scratch_;
};

struct RunResult {
  std::vector<TraceRecord> records;
  Configuration final_config;
  std::vector<int> final_types;
  long steps_run = 0;
  long accepted = 0;
  long degenerate_rejections = 0;
};

/// Deterministic given (seed, stream); one record per thinning interval after
/// burn-in; the final cached functionals are verified against recomputation.
RunResult run_chain(const QuermassParams& params, Rect window, const Boundary& boundary, int K,
                    const ChainOptions& options, std::uint64_t seed, std::uint64_t stream = 0);

std::string trace_to_csv(const std::vector<TraceRecord>& records);

}  // namespace quermass

#include "quermass/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace quermass {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double fold_into(double v, double lo, double hi) {
  const double period = 2.0 * (hi - lo);
  double t = std::fmod(v - lo, period);
  if (t < 0) t += period;
  if (t > hi - lo) t = period - t;
  return lo + t;
}

}  // namespace

const char* move_name(MoveKind m) {
  switch (m) {
    case MoveKind::birth: return "birth";
    case MoveKind::death: return "death";
    case MoveKind::translate: return "translate";
  }
  return "?";
}

Boundary Boundary::fixed(std::vector<Disk> disks, std::vector<int> types) {
  Boundary b;
  b.kind = BoundaryKind::fixed_outside;
  b.outside = std::move(disks);
  if (types.empty()) types.assign(b.outside.size(), 0);
  b.outside_types = std::move(types);
  return b;
}

ChainState::ChainState(const QuermassParams& params, Rect window, Boundary boundary, int K,
                       std::uint64_t seed, std::uint64_t stream, ProposalMix mix)
    : params_(params),
      weights_(params.weights()),
      window_(window),
      boundary_(std::move(boundary)),
      K_(K < 1 ? 1 : K),
      mix_(mix),
      rng_(seed, stream),
      config_(window, params.r1) {
  params_.validate();
  if (!(window.area() > 0)) throw std::invalid_argument("window must have positive area");
  track_cache_ = weights_.theta1 != 0 || weights_.theta2 != 0 || weights_.theta3 != 0;

  // Keep only boundary disks that can interact with germs in the window.
  if (boundary_.kind == BoundaryKind::fixed_outside) {
    std::vector<Disk> kept;
    std::vector<int> kept_types;
    for (std::size_t i = 0; i < boundary_.outside.size(); ++i) {
      const Disk& d = boundary_.outside[i];
      if (window_.contains(d.center())) continue;  // outside points live outside
      if (window_.distance_to(d.center()) <= 2.0 * params_.r1) {
        kept.push_back(d);
        kept_types.push_back(i < boundary_.outside_types.size() ? boundary_.outside_types[i] : 0);
      }
    }
    boundary_.outside = std::move(kept);
    boundary_.outside_types = std::move(kept_types);
  } else {
    boundary_.outside.clear();
    boundary_.outside_types.clear();
  }

  if (track_cache_ && boundary_.kind == BoundaryKind::periodic) {
    periodic_energy_cache_ = periodic_energy();
    have_periodic_energy_ = true;
  }
}

Functionals ChainState::boundary_functionals() const {
  if (!have_f_outside_) {
    Configuration out(window_.expanded(2.0 * params_.r1), params_.r1);
    for (const Disk& d : boundary_.outside) out.add(d);
    const_cast<ChainState*>(this)->f_outside_ = functionals(out);
    const_cast<ChainState*>(this)->have_f_outside_ = true;
  }
  return f_outside_;
}

void ChainState::build_periodic(Configuration& aug, Configuration& ghosts) const {
  const double reach = 2.0 * params_.r1;
  const Rect bounds = window_.expanded(2.0 * reach);
  aug = Configuration(bounds, params_.r1, 2.0 * reach);
  ghosts = Configuration(bounds, params_.r1, 2.0 * reach);
  for (const Disk& d : config_.disks()) aug.add(d);
  const double W = window_.width(), H = window_.height();
  for (const Disk& d : config_.disks()) {
    for (int ox = -1; ox <= 1; ++ox)
      for (int oy = -1; oy <= 1; ++oy) {
        if (!ox && !oy) continue;
        Disk g = d;
        g.x += ox * W;
        g.y += oy * H;
        if (window_.distance_to(g.center()) <= reach && window_.distance_to(g.center()) > 0) {
          aug.add(g);
          ghosts.add(g);
        }
      }
  }
}

double ChainState::periodic_energy() const {
  Configuration aug, ghosts;
  build_periodic(aug, ghosts);
  const Functionals fa = functionals(aug);
  const Functionals fg = functionals(ghosts);
  return weights_.theta1 * (fa.area - fg.area) + weights_.theta2 * (fa.perimeter - fg.perimeter) +
         weights_.theta3 * static_cast<double>(fa.euler - fg.euler);
}

Functionals ChainState::current_functionals() const {
  switch (boundary_.kind) {
    case BoundaryKind::free_boundary:
      return functionals(config_);
    case BoundaryKind::fixed_outside: {
      Configuration all(window_.expanded(2.0 * params_.r1), params_.r1);
      for (const Disk& d : config_.disks()) all.add(d);
      for (const Disk& d : boundary_.outside) all.add(d);
      const Functionals fa = functionals(all);
      const Functionals fo = boundary_functionals();
      return {fa.area - fo.area, fa.perimeter - fo.perimeter, fa.euler - fo.euler,
              fa.components - fo.components, fa.holes - fo.holes};
    }
    case BoundaryKind::periodic: {
      Configuration aug, ghosts;
      build_periodic(aug, ghosts);
      const Functionals fa = functionals(aug);
      const Functionals fg = functionals(ghosts);
      return {fa.area - fg.area, fa.perimeter - fg.perimeter, fa.euler - fg.euler,
              fa.components - fg.components, fa.holes - fg.holes};
    }
  }
  return {};
}

std::optional<Functionals> ChainState::cached_functionals() const {
  if (!track_cache_ || boundary_.kind == BoundaryKind::periodic) return std::nullopt;
  Functionals f;
  f.area = cache_area_;
  f.perimeter = cache_perimeter_;
  f.euler = cache_euler_;
  f.components = 0;  // not tracked incrementally
  f.holes = 0;
  return f;
}

void ChainState::check_cache(double rel_tol) {
  if (!track_cache_ || boundary_.kind == BoundaryKind::periodic) return;
  Functionals f;
  try {
    f = current_functionals();
  } catch (const DegenerateGeometry&) {
    return;  // cannot verify against a near-degenerate instantaneous state
  }
  const auto close = [&](double a, double b) {
    return std::abs(a - b) <= rel_tol * std::max({1.0, std::abs(a), std::abs(b)});
  };
  if (!close(cache_area_, f.area) || !close(cache_perimeter_, f.perimeter) ||
      cache_euler_ != f.euler)
    throw std::logic_error("functional cache diverged from recomputation");
  cache_area_ = f.area;
  cache_perimeter_ = f.perimeter;
}

void ChainState::gather_environment(Vec2 where, double radius, int exclude_index,
                                    std::vector<Disk>& disks) const {
  disks.clear();
  config_.neighbors_within(where, radius, id_scratch_);
  for (int id : id_scratch_)
    if (id != exclude_index) disks.push_back(config_.disk(id));
  if (boundary_.kind == BoundaryKind::fixed_outside) {
    for (const Disk& d : boundary_.outside) {
      const double dx = d.x - where.x, dy = d.y - where.y;
      if (dx * dx + dy * dy <= radius * radius) disks.push_back(d);
    }
  } else if (boundary_.kind == BoundaryKind::periodic) {
    const double W = window_.width(), H = window_.height();
    for (int ox = -1; ox <= 1; ++ox)
      for (int oy = -1; oy <= 1; ++oy) {
        if (!ox && !oy) continue;
        const Vec2 shifted{where.x - ox * W, where.y - oy * H};
        config_.neighbors_within(shifted, radius, id_scratch_);
        for (int id : id_scratch_) {
          if (id == exclude_index) continue;
          Disk g = config_.disk(id);
          g.x += ox * W;
          g.y += oy * H;
          const double dx = g.x - where.x, dy = g.y - where.y;
          if (dx * dx + dy * dy <= radius * radius) disks.push_back(g);
        }
      }
  }
  std::sort(disks.begin(), disks.end(), [](const Disk& a, const Disk& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.r < b.r;
  });
}

bool ChainState::hardcore_violation(const Disk& p, int type, int exclude_index) const {
  if (K_ <= 1) return false;
  const double reach = p.r + params_.r1;
  config_.neighbors_within(p.center(), reach, id_scratch_);
  for (int id : id_scratch_) {
    if (id == exclude_index || types_[static_cast<std::size_t>(id)] == type) continue;
    const Disk& q = config_.disk(id);
    if (germ_distance(p, q) <= p.r + q.r) return true;
  }
  if (boundary_.kind == BoundaryKind::fixed_outside) {
    for (std::size_t i = 0; i < boundary_.outside.size(); ++i) {
      if (boundary_.outside_types[i] == type) continue;
      const Disk& q = boundary_.outside[i];
      if (germ_distance(p, q) <= p.r + q.r) return true;
    }
  } else if (boundary_.kind == BoundaryKind::periodic) {
    const double W = window_.width(), H = window_.height();
    for (int ox = -1; ox <= 1; ++ox)
      for (int oy = -1; oy <= 1; ++oy) {
        if (!ox && !oy) continue;
        const Vec2 shifted{p.x - ox * W, p.y - oy * H};
        config_.neighbors_within(shifted, reach, id_scratch_);
        for (int id : id_scratch_) {
          if (id == exclude_index || types_[static_cast<std::size_t>(id)] == type) continue;
          Disk q = config_.disk(id);
          q.x += ox * W;
          q.y += oy * H;
          if (germ_distance(p, q) <= p.r + q.r) return true;
        }
      }
  }
  return false;
}

ChainState::EnergyDelta ChainState::insertion_delta(const Disk& p, int type, int exclude_index) {
  EnergyDelta out;
  if (hardcore_violation(p, type, exclude_index)) {
    out.hardcore = true;
    out.energy = std::numeric_limits<double>::infinity();
    return out;
  }
  if (!track_cache_) return out;  // all thetas zero: energy identically 0
  gather_environment(p.center(), p.r + params_.r1, exclude_index, env_scratch_);
  const double tol = kGeomEps * std::min(params_.r0, p.r);
  const LocalDelta ld = add_disk_delta(p, env_scratch_, tol);
  out.d_area = ld.d_area;
  out.d_perimeter = ld.d_perimeter;
  out.d_euler = ld.d_euler;
  out.energy = weights_.theta1 * ld.d_area + weights_.theta2 * ld.d_perimeter +
               weights_.theta3 * static_cast<double>(ld.d_euler);
  return out;
}

void ChainState::apply_cache(const EnergyDelta& d, double sign) {
  if (!track_cache_ || boundary_.kind == BoundaryKind::periodic) return;
  cache_area_ += sign * d.d_area;
  cache_perimeter_ += sign * d.d_perimeter;
  cache_euler_ += static_cast<long>(sign) * d.d_euler;
}

Vec2 ChainState::reflect_into_window(Vec2 p) const {
  return {fold_into(p.x, window_.x0, window_.x1), fold_into(p.y, window_.y0, window_.y1)};
}

double ChainState::log_acceptance_birth(const Disk& p, int type) {
  const long n = config_.size();
  const EnergyDelta ed = insertion_delta(p, type, -1);
  const double base = std::log(params_.z * window_.area()) - std::log(static_cast<double>(n + 1));
  return base - ed.energy;
}

double ChainState::log_acceptance_death(int index) {
  const long n = config_.size();
  const Disk p = config_.disk(index);
  const EnergyDelta ed = insertion_delta(p, types_[static_cast<std::size_t>(index)], index);
  const double base = std::log(static_cast<double>(n)) - std::log(params_.z * window_.area());
  return base + ed.energy;
}

ChainState::StepOutcome ChainState::step() {
  ++step_;
  StepOutcome out{MoveKind::birth, false, false};
  const double u = rng_.uniform01();
  const double total = mix_.p_birth + mix_.p_death + mix_.p_move;
  const long n = config_.size();
  const bool periodic_energy_path = track_cache_ && boundary_.kind == BoundaryKind::periodic;

  if (u < mix_.p_birth / total) {
    out.move = MoveKind::birth;
    Disk p{rng_.uniform(window_.x0, window_.x1), rng_.uniform(window_.y0, window_.y1),
           params_.radius_law.sample(rng_)};
    const int type = K_ > 1 ? static_cast<int>(rng_.below(static_cast<std::uint64_t>(K_))) : 0;
    if (hardcore_violation(p, type, -1)) return out;

    if (periodic_energy_path) {
      const int idx = config_.add(p);
      types_.push_back(type);
      double e_new = 0.0;
      try {
        e_new = periodic_energy();
      } catch (const DegenerateGeometry&) {
        config_.remove_swap(idx);
        types_.pop_back();
        out.degenerate_rejection = true;
        return out;
      }
      const double log_a = std::log(params_.z * window_.area()) -
                           std::log(static_cast<double>(n + 1)) -
                           (e_new - periodic_energy_cache_);
      if (log_a >= 0 || std::log(rng_.uniform_pos()) < log_a) {
        periodic_energy_cache_ = e_new;
        out.accepted = true;
      } else {
        config_.remove_swap(idx);
        types_.pop_back();
      }
    } else {
      EnergyDelta ed;
      try {
        ed = insertion_delta(p, type, -1);
      } catch (const DegenerateGeometry&) {
        out.degenerate_rejection = true;
        return out;
      }
      const double log_a = std::log(params_.z * window_.area()) -
                           std::log(static_cast<double>(n + 1)) - ed.energy;
      if (log_a >= 0 || std::log(rng_.uniform_pos()) < log_a) {
        config_.add(p);
        types_.push_back(type);
        apply_cache(ed, +1.0);
        out.accepted = true;
      }
    }
    if (out.accepted) {
      const double bound = explosion_factor_ * params_.z * window_.area();
      if (static_cast<double>(config_.size()) > std::max(bound, 32.0)) {
        std::ostringstream os;
        os << "configuration exploded: n = " << config_.size() << " exceeds "
           << explosion_factor_ << " * z * |window| = " << bound << " at step " << step_
           << " (non-stable parameter choice?)";
        throw ExplosionGuard(os.str());
      }
    }
    return out;
  }

  if (u < (mix_.p_birth + mix_.p_death) / total) {
    out.move = MoveKind::death;
    if (n == 0) return out;
    const int idx = static_cast<int>(rng_.below(static_cast<std::uint64_t>(n)));
    const Disk p = config_.disk(idx);
    const int type = types_[static_cast<std::size_t>(idx)];

    if (periodic_energy_path) {
      const int moved = config_.remove_swap(idx);
      const int saved_type = type;
      if (moved >= 0) types_[static_cast<std::size_t>(idx)] = types_[static_cast<std::size_t>(moved)];
      types_.pop_back();
      double e_new = 0.0;
      bool degen = false;
      try {
        e_new = periodic_energy();
      } catch (const DegenerateGeometry&) {
        degen = true;
      }
      const double log_a = degen ? -1.0
                                 : std::log(static_cast<double>(n)) -
                                       std::log(params_.z * window_.area()) -
                                       (e_new - periodic_energy_cache_);
      if (!degen && (log_a >= 0 || std::log(rng_.uniform_pos()) < log_a)) {
        periodic_energy_cache_ = e_new;
        out.accepted = true;
      } else {
        // Re-adding p restores the typed multiset (internal index order may
        // differ, which nothing observes).
        config_.add(p);
        types_.push_back(saved_type);
        out.degenerate_rejection = degen;
      }
    } else {
      EnergyDelta ed;
      try {
        ed = insertion_delta(p, type, idx);
      } catch (const DegenerateGeometry&) {
        out.degenerate_rejection = true;
        return out;
      }
      const double log_a = std::log(static_cast<double>(n)) -
                           std::log(params_.z * window_.area()) + ed.energy;
      if (log_a >= 0 || std::log(rng_.uniform_pos()) < log_a) {
        const int moved = config_.remove_swap(idx);
        if (moved >= 0) types_[static_cast<std::size_t>(idx)] = types_[static_cast<std::size_t>(moved)];
        types_.pop_back();
        apply_cache(ed, -1.0);
        out.accepted = true;
      }
    }
    return out;
  }

  out.move = MoveKind::translate;
  if (n == 0) return out;
  const int idx = static_cast<int>(rng_.below(static_cast<std::uint64_t>(n)));
  const Disk old = config_.disk(idx);
  const double scale = mix_.translate_scale * params_.r0;
  const Vec2 proposal = reflect_into_window(
      {old.x + rng_.normal(0.0, scale), old.y + rng_.normal(0.0, scale)});
  Disk moved = old;
  moved.x = proposal.x;
  moved.y = proposal.y;
  const int type = types_[static_cast<std::size_t>(idx)];
  if (hardcore_violation(moved, type, idx)) return out;

  if (periodic_energy_path) {
    config_.move(idx, proposal);
    double e_new = 0.0;
    bool degen = false;
    try {
      e_new = periodic_energy();
    } catch (const DegenerateGeometry&) {
      degen = true;
    }
    const double log_a = degen ? -1.0 : -(e_new - periodic_energy_cache_);
    if (!degen && (log_a >= 0 || std::log(rng_.uniform_pos()) < log_a)) {
      periodic_energy_cache_ = e_new;
      out.accepted = true;
    } else {
      config_.move(idx, old.center());
      out.degenerate_rejection = degen;
    }
  } else {
    EnergyDelta ed_old, ed_new;
    try {
      ed_old = insertion_delta(old, type, idx);
      ed_new = insertion_delta(moved, type, idx);
    } catch (const DegenerateGeometry&) {
      out.degenerate_rejection = true;
      return out;
    }
    const double log_a = -(ed_new.energy - ed_old.energy);
    if (log_a >= 0 || std::log(rng_.uniform_pos()) < log_a) {
      config_.move(idx, proposal);
      apply_cache(ed_old, -1.0);
      apply_cache(ed_new, +1.0);
      out.accepted = true;
    }
  }
  return out;
}

void ChainState::insert(const Disk& p, int type) {
  if (type < 0 || type >= K_) throw std::invalid_argument("type label out of range");
  const EnergyDelta ed = insertion_delta(p, type, -1);
  if (ed.hardcore) throw std::invalid_argument("insertion violates the cross-type hardcore");
  config_.add(p);
  types_.push_back(type);
  if (boundary_.kind == BoundaryKind::periodic) {
    if (track_cache_) periodic_energy_cache_ = periodic_energy();
  } else {
    apply_cache(ed, +1.0);
  }
}

std::vector<long> ChainState::per_type_counts() const {
  std::vector<long> counts(static_cast<std::size_t>(K_), 0);
  for (int t : types_) ++counts[static_cast<std::size_t>(t)];
  return counts;
}

TraceRecord ChainState::propose_and_step() {
  const StepOutcome outcome = step();
  TraceRecord rec;
  rec.step = step_;
  rec.n_points = config_.size();
  Functionals f;
  try {
    f = current_functionals();
  } catch (const DegenerateGeometry&) {
    // Deterministic jitter on a copy; the chain state itself is untouched.
    Configuration jittered(window_.expanded(2.0 * params_.r1), params_.r1);
    Rng jrng(0x7157u ^ static_cast<std::uint64_t>(step_), static_cast<std::uint64_t>(config_.size()));
    const double amp = 1e-7 * params_.r0;
    for (const Disk& d : config_.disks())
      jittered.add({d.x + jrng.uniform(-amp, amp), d.y + jrng.uniform(-amp, amp), d.r});
    f = functionals(jittered);
  }
  rec.area = f.area;
  rec.perimeter = f.perimeter;
  rec.euler = f.euler;
  rec.components = f.components;
  rec.holes = f.holes;
  rec.accepted = outcome.accepted;
  rec.move = outcome.move;
  rec.per_type_counts = per_type_counts();
  return rec;
}

RunResult run_chain(const QuermassParams& params, Rect window, const Boundary& boundary, int K,
                    const ChainOptions& options, std::uint64_t seed, std::uint64_t stream) {
  if (options.n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  ChainState chain(params, window, boundary, K, seed, stream, options.mix);
  chain.set_explosion_factor(options.explosion_factor);
  const long burn_in =
      options.burn_in >= 0 ? options.burn_in : static_cast<long>(0.2 * static_cast<double>(options.n_steps));
  long thinning = options.thinning;
  if (thinning <= 0)
    thinning = std::max<long>(1, std::lround(params.z * window.area()));

  RunResult result;
  for (long s = 1; s <= options.n_steps; ++s) {
    const auto outcome = chain.step();
    if (outcome.accepted) ++result.accepted;
    if (outcome.degenerate_rejection) ++result.degenerate_rejections;
    if (s > burn_in && (s - burn_in) % thinning == 0) {
      TraceRecord rec;
      rec.step = s;
      rec.n_points = chain.config().size();
      Functionals f;
      try {
        f = chain.current_functionals();
      } catch (const DegenerateGeometry&) {
        Configuration jittered(window.expanded(2.0 * params.r1), params.r1);
        Rng jrng(0x7157u ^ static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(chain.config().size()));
        const double amp = 1e-7 * params.r0;
        for (const Disk& d : chain.config().disks())
          jittered.add({d.x + jrng.uniform(-amp, amp), d.y + jrng.uniform(-amp, amp), d.r});
        f = functionals(jittered);
      }
      rec.area = f.area;
      rec.perimeter = f.perimeter;
      rec.euler = f.euler;
      rec.components = f.components;
      rec.holes = f.holes;
      rec.accepted = outcome.accepted;
      rec.move = outcome.move;
      rec.per_type_counts = chain.per_type_counts();
      result.records.push_back(std::move(rec));
    }
    if (options.cache_check_interval > 0 && s % options.cache_check_interval == 0)
      chain.check_cache();
  }
  chain.check_cache();
  result.final_config = chain.config();
  result.final_types = chain.types();
  result.steps_run = options.n_steps;
  return result;
}

std::string trace_to_csv(const std::vector<TraceRecord>& records) {
  std::ostringstream os;
  os << "step,n,area,perimeter,euler,components,holes,accepted,move,type_counts\n";
  for (const TraceRecord& r : records) {
    os << r.step << "," << r.n_points << "," << fmt17(r.area) << "," << fmt17(r.perimeter) << ","
       << r.euler << "," << r.components << "," << r.holes << "," << (r.accepted ? 1 : 0) << ","
       << move_name(r.move) << ",";
    for (std::size_t i = 0; i < r.per_type_counts.size(); ++i) {
      if (i) os << "|";
      os << r.per_type_counts[i];
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace quermass

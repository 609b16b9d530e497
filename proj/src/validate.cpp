#include "quermass/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"
#include "quermass/oracle.hpp"
#include "quermass/parallel.hpp"
#include "quermass/params.hpp"
#include "quermass/percolation.hpp"
#include "quermass/rng.hpp"
#include "quermass/sampler.hpp"
#include "quermass/stats.hpp"

namespace quermass::validate {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Configuration random_union(Rng& rng, Rect window, int n, double r_lo, double r_hi) {
  Configuration config(window, r_hi);
  for (int i = 0; i < n; ++i)
    config.add({rng.uniform(window.x0, window.x1), rng.uniform(window.y0, window.y1),
                r_lo == r_hi ? r_lo : rng.uniform(r_lo, r_hi)});
  return config;
}

using Cell = std::pair<int, int>;

std::vector<Cell> boundary_cells(const std::vector<Cell>& cells) {
  std::set<Cell> in(cells.begin(), cells.end());
  std::vector<Cell> out;
  for (const auto& [i, j] : cells) {
    if (!in.count({i + 1, j}) || !in.count({i - 1, j}) || !in.count({i, j + 1}) ||
        !in.count({i, j - 1}))
      out.push_back({i, j});
  }
  return out.empty() ? cells : out;
}

double point_to_cells(Vec2 p, const std::vector<Cell>& cells, const PixelMask& mask) {
  double best = 1e300;
  for (const auto& [i, j] : cells) {
    const Vec2 c = mask.cell_center(i, j);
    best = std::min(best, std::hypot(p.x - c.x, p.y - c.y));
  }
  return best;
}

double cells_to_cells(const std::vector<Cell>& a, const std::vector<Cell>& b,
                      const PixelMask& mask) {
  double best = 1e300;
  for (const auto& [i, j] : a) {
    const Vec2 c = mask.cell_center(i, j);
    best = std::min(best, point_to_cells(c, b, mask));
  }
  return best;
}

}  // namespace

CheckResult kernel_oracle_agreement(const Options& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult out{"kernel_oracle_agreement", false, false, "", 0};
  const double r_lo = 1.0, r_hi = 2.0;
  const Rect window{0, 0, 12, 12};
  const double base_delta = opt.oracle_delta > 0 ? opt.oracle_delta : r_lo / 64.0;

  std::vector<std::string> failures(static_cast<std::size_t>(opt.oracle_configs));
  std::atomic<long> excluded{0}, kernel_degenerate{0}, coarse_skips{0};

  parallel_for(opt.oracle_configs, opt.threads, [&](long index) {
    Rng rng(opt.seed, static_cast<std::uint64_t>(index));
    const int n = static_cast<int>(rng.below(31));
    const Configuration config = random_union(rng, window, n, r_lo, r_hi);
    Functionals f;
    try {
      f = functionals(config);
    } catch (const DegenerateGeometry&) {
      ++kernel_degenerate;
      return;
    }
    PixelFunctionals pf;
    double delta = base_delta;
    bool usable = false;
    for (int attempt = 0; attempt < 2 && !usable; ++attempt, delta /= 4.0) {
      PixelMask mask;
      try {
        mask = rasterize(config, delta);
      } catch (const ResolutionTooCoarse&) {
        ++coarse_skips;
        return;
      }
      pf = pixel_functionals(mask);
      usable = !pf.degenerate;
      if (usable) {
        std::ostringstream err;
        if (pf.euler != f.euler || pf.components != f.components || pf.holes != f.holes)
          err << "count mismatch (kernel chi/c/h " << f.euler << "/" << f.components << "/"
              << f.holes << " vs oracle " << pf.euler << "/" << pf.components << "/" << pf.holes
              << ")";
        if (config.size() > 0 && std::abs(pf.area - f.area) > 2.0 * delta * f.perimeter)
          err << " area off by " << std::abs(pf.area - f.area);
        if (config.size() > 0 &&
            std::abs(pf.perimeter_estimate - f.perimeter) > 0.05 * std::max(f.perimeter, 1e-12))
          err << " perimeter off by relative "
              << std::abs(pf.perimeter_estimate - f.perimeter) / std::max(f.perimeter, 1e-12);
        failures[static_cast<std::size_t>(index)] = err.str();
      }
    }
    if (!usable) ++excluded;
  });

  long failed = 0;
  std::string first;
  for (const auto& f : failures)
    if (!f.empty()) {
      if (first.empty()) first = f;
      ++failed;
    }
  std::ostringstream details;
  details << opt.oracle_configs << " configs, " << failed << " mismatches, " << excluded.load()
          << " excluded as near-degenerate, " << kernel_degenerate.load() << " kernel-degenerate";
  if (coarse_skips.load() > 0) {
    out.skipped = true;
    details << ", " << coarse_skips.load() << " skipped: resolution too coarse";
  }
  if (!first.empty()) details << "; first: " << first;
  out.details = details.str();
  out.passed = failed == 0 && !out.skipped;
  out.seconds = seconds_since(t0);
  return out;
}

CheckResult delta_identity(const Options& opt, const DeltaFn& delta_fn) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult out{"delta_identity", false, false, "", 0};
  const DeltaFn delta = delta_fn ? delta_fn : [](const Disk& p, const Configuration& c) {
    return delta_functionals(p, c);
  };
  const double r_lo = 0.5, r_hi = 1.0;
  const Rect window{0, 0, 10, 10};
  const double area_tol = 1e-9 * r_hi * r_hi;
  const double len_tol = 1e-9 * r_hi;

  std::vector<std::string> failures(static_cast<std::size_t>(opt.identity_pairs));
  parallel_for(opt.identity_pairs, opt.threads, [&](long index) {
    Rng rng(opt.seed + 1, static_cast<std::uint64_t>(index));
    for (int attempt = 0; attempt < 64; ++attempt) {
      const int n = static_cast<int>(rng.below(31));
      const Configuration config = random_union(rng, window, n, r_lo, r_hi);
      const Disk p{rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(r_lo, r_hi)};
      try {
        const FunctionalDelta d = delta(p, config);
        const Functionals f0 = functionals(config);
        Configuration bigger(config.window(), config.r_max_bound());
        for (const Disk& q : config.disks()) bigger.add(q);
        bigger.add(p);
        const Functionals f1 = functionals(bigger);
        std::ostringstream err;
        if (std::abs((f1.area - f0.area) - d.d_area) > area_tol) err << "area drift; ";
        if (std::abs((f1.perimeter - f0.perimeter) - d.d_perimeter) > len_tol)
          err << "perimeter drift; ";
        if (f1.euler - f0.euler != d.d_euler) err << "euler mismatch; ";
        if (f1.components - f0.components != d.d_components) err << "component mismatch; ";
        if (f1.holes - f0.holes != d.d_holes) err << "hole mismatch; ";
        failures[static_cast<std::size_t>(index)] = err.str();
        return;
      } catch (const DegenerateGeometry&) {
        // probability-zero configuration; redraw
      }
    }
  });

  long failed = 0;
  std::string first;
  for (const auto& f : failures)
    if (!f.empty()) {
      if (first.empty()) first = f;
      ++failed;
    }
  std::ostringstream details;
  details << opt.identity_pairs << " pairs, " << failed << " mismatches";
  if (!first.empty()) details << "; first: " << first;
  out.details = details.str();
  out.passed = failed == 0;
  out.seconds = seconds_since(t0);
  return out;
}

CheckResult delta_bounds(const Options& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult out{"delta_bounds", false, false, "", 0};
  const double r_lo = 0.5, r_hi = 1.0;
  const LocalDeltaBounds b = local_delta_bounds(r_lo, r_hi);
  const Rect window{0, 0, 8, 8};

  std::atomic<long> range_violations{0}, combo_violations{0};
  parallel_for(opt.bound_samples, opt.threads, [&](long index) {
    Rng rng(opt.seed + 2, static_cast<std::uint64_t>(index));
    for (int attempt = 0; attempt < 64; ++attempt) {
      const int n = static_cast<int>(rng.below(41));
      const Configuration config = random_union(rng, window, n, r_lo, r_hi);
      const Disk p{rng.uniform(0, 8), rng.uniform(0, 8), rng.uniform(r_lo, r_hi)};
      try {
        const FunctionalDelta d = delta_functionals(p, config);
        const double slack = 1e-9;
        if (d.d_area < -slack || d.d_area > b.a_max + slack) ++range_violations;
        if (d.d_perimeter < b.l_min - slack || d.d_perimeter > b.l_max + slack)
          ++range_violations;
        if (static_cast<double>(d.d_components) < b.c_min - slack || d.d_components > 1)
          ++range_violations;
        for (int s1 = -1; s1 <= 1; ++s1)
          for (int s2 = -1; s2 <= 1; ++s2)
            for (int s3 = -1; s3 <= 1; ++s3) {
              const QuermassWeights w{static_cast<double>(s1), static_cast<double>(s2),
                                      static_cast<double>(s3)};
              const double combo = w.theta1 * d.d_area + w.theta2 * d.d_perimeter +
                                   w.theta3 * static_cast<double>(d.d_components);
              if (combo > energy_combination_bound(w, r_lo, r_hi) + slack) ++combo_violations;
            }
        return;
      } catch (const DegenerateGeometry&) {
      }
    }
  });

  std::ostringstream details;
  details << opt.bound_samples << " samples, " << range_violations.load()
          << " range violations, " << combo_violations.load() << " combination violations";
  out.details = details.str();
  out.passed = range_violations.load() == 0 && combo_violations.load() == 0;
  out.seconds = seconds_since(t0);
  return out;
}

CheckResult perimeter_density_bound(const Options& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult out{"perimeter_density_bound", false, false, "", 0};
  const double r_lo = 0.5, r_hi = 1.0;
  const double W = 8.0;
  // grains fit in [0, W]^2; expanding by r_lo rounds the corners
  const double expanded_area = W * W + 4.0 * W * r_lo + kPi * r_lo * r_lo;
  const double bound = 2.0 * expanded_area / r_lo;

  std::atomic<long> violations{0};
  std::atomic<double> worst{0.0};
  parallel_for(opt.perimeter_configs, opt.threads, [&](long index) {
    Rng rng(opt.seed + 3, static_cast<std::uint64_t>(index));
    for (int attempt = 0; attempt < 16; ++attempt) {
      const int n = 10 + static_cast<int>(rng.below(70));
      Configuration config({0, 0, W, W}, r_hi);
      for (int i = 0; i < n; ++i) {
        const double r = rng.uniform(r_lo, r_hi);
        config.add({rng.uniform(r, W - r), rng.uniform(r, W - r), r});
      }
      try {
        const Functionals f = functionals(config);
        double seen = worst.load();
        while (f.perimeter > seen && !worst.compare_exchange_weak(seen, f.perimeter)) {
        }
        if (f.perimeter > bound) ++violations;
        return;
      } catch (const DegenerateGeometry&) {
      }
    }
  });

  std::ostringstream details;
  details << opt.perimeter_configs << " configs, bound " << bound << ", worst perimeter "
          << worst.load() << ", " << violations.load() << " violations";
  out.details = details.str();
  out.passed = violations.load() == 0;
  out.seconds = seconds_since(t0);
  return out;
}

CheckResult hole_distance_bounds(const Options& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult out{"hole_distance_bounds", false, false, "", 0};
  const double r0 = 1.0;
  const Rect window{0, 0, 12, 12};
  const double sqrt3 = std::sqrt(3.0);

  std::atomic<long> configs_used{0}, gap_checks{0}, germ_checks{0}, pair_checks{0};
  std::atomic<long> violations{0};
  std::vector<std::string> failures(static_cast<std::size_t>(opt.hole_configs));

  parallel_for(opt.hole_configs, opt.threads, [&](long index) {
    Rng rng(opt.seed + 4, static_cast<std::uint64_t>(index));
    for (int attempt = 0; attempt < 400; ++attempt) {
      const int n = 44 + static_cast<int>(rng.below(16));
      const Configuration config = random_union(rng, window, n, r0, r0);
      // Only a sub-cell overlap neck can attribute disks to the wrong
      // component here; gap-bridging merges just skip pairs (conservative).
      if (contact_risk(config, r0 / 64.0).split_risk) continue;
      PixelMask mask;
      try {
        mask = rasterize(config, r0 / 64.0);
      } catch (const ResolutionTooCoarse&) {
        return;
      }
      std::vector<int> labels;
      const int n_comp = label_foreground(mask, labels);
      if (n_comp < 1) continue;

      struct Hole {
        int component;
        std::vector<Cell> cells;
        std::set<Cell> cell_set;
        std::vector<Cell> shrunk_boundary;
      };
      std::vector<Hole> holes;
      for (int c = 0; c < n_comp; ++c) {
        for (auto& cells : component_holes(mask, labels, c)) {
          auto shrunk = shrink_one(cells);
          if (shrunk.empty()) continue;  // sub-pixel sliver, not measurable
          Hole h;
          h.component = c;
          h.cell_set.insert(cells.begin(), cells.end());
          h.cells = std::move(cells);
          h.shrunk_boundary = boundary_cells(shrunk);
          holes.push_back(std::move(h));
        }
      }
      if (holes.empty()) continue;
      ++configs_used;

      // disks per oracle component (via the germ's cell label)
      std::vector<std::vector<Disk>> comp_disks(static_cast<std::size_t>(n_comp));
      for (const Disk& d : config.disks()) {
        const int i = static_cast<int>(std::lround((d.x - mask.origin.x) / mask.delta));
        const int j = static_cast<int>(std::lround((d.y - mask.origin.y) / mask.delta));
        const int lab = labels[static_cast<std::size_t>(j) * mask.nx + i];
        if (lab >= 0) comp_disks[static_cast<std::size_t>(lab)].push_back(d);
      }
      const auto dist_to_comp = [&](Vec2 p, int c) {
        double best = 1e300;
        for (const Disk& d : comp_disks[static_cast<std::size_t>(c)])
          best = std::min(best, std::hypot(p.x - d.x, p.y - d.y) - d.r);
        return best;
      };
      const auto cell_of = [&](Vec2 p) -> Cell {
        return {static_cast<int>(std::lround((p.x - mask.origin.x) / mask.delta)),
                static_cast<int>(std::lround((p.y - mask.origin.y) / mask.delta))};
      };

      std::ostringstream err;
      // squared-distance gap: d(x,T)^2 >= d(x,C)^2 + 2 d(x,C) r0
      for (const Hole& hole : holes) {
        for (int trial = 0; trial < 24; ++trial) {
          const Vec2 x{rng.uniform(window.x0, window.x1), rng.uniform(window.y0, window.y1)};
          const double dc = dist_to_comp(x, hole.component);
          if (dc <= 0) continue;                       // inside the component
          if (hole.cell_set.count(cell_of(x))) continue;  // inside the hole
          const double dt = point_to_cells(x, hole.shrunk_boundary, mask);
          ++gap_checks;
          if (dt * dt + 1e-9 < dc * dc + 2.0 * dc * r0) {
            ++violations;
            err << "gap violation dt=" << dt << " dc=" << dc << "; ";
          }
        }
      }
      // germ of one component vs hole of another
      for (const Hole& hole : holes) {
        for (int c = 0; c < n_comp; ++c) {
          if (c == hole.component) continue;
          for (const Disk& d : comp_disks[static_cast<std::size_t>(c)]) {
            if (hole.cell_set.count(cell_of(d.center()))) continue;  // ball inside the hole
            const double dist = point_to_cells(d.center(), hole.shrunk_boundary, mask);
            ++germ_checks;
            if (dist + 1e-9 < sqrt3 * r0) {
              ++violations;
              err << "germ-hole violation d=" << dist << "; ";
            }
          }
        }
      }
      // holes of distinct components
      for (std::size_t a = 0; a < holes.size(); ++a)
        for (std::size_t b2 = a + 1; b2 < holes.size(); ++b2) {
          if (holes[a].component == holes[b2].component) continue;
          bool nested = false;
          for (const Cell& cell : holes[a].cells)
            if (holes[b2].cell_set.count(cell)) {
              nested = true;
              break;
            }
          if (nested) continue;
          const double dist =
              cells_to_cells(holes[a].shrunk_boundary, holes[b2].shrunk_boundary, mask);
          ++pair_checks;
          if (dist + 1e-9 < 2.0 * r0) {
            ++violations;
            err << "hole-hole violation d=" << dist << "; ";
          }
        }
      failures[static_cast<std::size_t>(index)] = err.str();
      return;
    }
  });

  std::string first;
  for (const auto& f : failures)
    if (!f.empty()) {
      first = f;
      break;
    }
  std::ostringstream details;
  details << configs_used.load() << " hole-bearing configs (target " << opt.hole_configs << "), "
          << gap_checks.load() << "+" << germ_checks.load() << "+" << pair_checks.load()
          << " checks, " << violations.load() << " violations";
  if (!first.empty()) details << "; first: " << first;
  out.details = details.str();
  out.passed = violations.load() == 0 && configs_used.load() >= opt.hole_configs / 2;
  out.seconds = seconds_since(t0);
  return out;
}

CheckResult poisson_reduction(const Options& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult out{"poisson_reduction", false, false, "", 0};
  QuermassParams params;
  params.z = 1.0;
  params.r0 = 0.5;
  params.r1 = 1.0;
  params.radius_law = RadiusLaw::uniform(0.5, 1.0);
  const Rect window{0, 0, 10, 10};
  const long burn_in = opt.poisson_steps / 5;
  const long thinning = 2000;  // decorrelates the count series

  ChainState chain(params, window, Boundary::free(), 1, opt.seed + 5);
  std::vector<long> counts;
  std::vector<double> radii;
  for (long s = 1; s <= opt.poisson_steps; ++s) {
    chain.step();
    if (s > burn_in && (s - burn_in) % thinning == 0) {
      counts.push_back(chain.config().size());
      for (const Disk& d : chain.config().disks()) radii.push_back(d.r);
    }
  }
  const auto gof = chi_square_poisson(counts, params.z * window.area());
  const auto ks = ks_test(radii, [&](double r) { return params.radius_law.cdf(r); });
  std::ostringstream details;
  details << counts.size() << " thinned counts, chi2 p=" << gof.p_value << " (stat " << gof.stat
          << ", dof " << gof.dof << "); " << radii.size() << " radii, KS p=" << ks.p_value;
  out.details = details.str();
  out.passed = gof.p_value > 0.01 && ks.p_value > 0.01;
  out.seconds = seconds_since(t0);
  return out;
}

CheckResult sandwich_domination(const Options& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult out{"sandwich_domination", false, false, "", 0};
  QuermassParams params;
  params.theta1 = 0.5;
  params.theta2 = 0.2;
  params.theta3 = 0.0;
  params.z = 1.0;
  params.r0 = 0.5;
  params.r1 = 1.0;
  params.radius_law = RadiusLaw::uniform(0.5, 1.0);
  const Rect window{0, 0, 15, 15};
  const auto [c0, c1] = poisson_sandwich_bounds(params);
  const double lo = params.z * std::exp(-c1);
  const double hi = params.z * std::exp(-c0);

  std::vector<double> densities(static_cast<std::size_t>(opt.sandwich_replicas));
  parallel_for(opt.sandwich_replicas, opt.threads, [&](long rep) {
    ChainOptions copt;
    copt.n_steps = opt.sandwich_steps;
    copt.burn_in = opt.sandwich_steps / 4;
    copt.thinning = 500;
    ChainState chain(params, window, Boundary::free(), 1, opt.seed + 6,
                     static_cast<std::uint64_t>(rep));
    double acc = 0.0;
    long m = 0;
    for (long s = 1; s <= copt.n_steps; ++s) {
      chain.step();
      if (s > copt.burn_in && (s - copt.burn_in) % copt.thinning == 0) {
        acc += static_cast<double>(chain.config().size());
        ++m;
      }
    }
    densities[static_cast<std::size_t>(rep)] = acc / static_cast<double>(m) / window.area();
  });

  const MeanSe ms = mean_se(densities);
  std::ostringstream details;
  details << "mean density " << ms.mean << " (se " << ms.se << ") vs sandwich [" << lo << ", "
          << hi << "], C0=" << c0 << " C1=" << c1;
  out.details = details.str();
  out.passed = ms.mean + 3.0 * ms.se >= lo && ms.mean - 3.0 * ms.se <= hi;
  out.seconds = seconds_since(t0);
  return out;
}

Report run_all(const Options& opt) {
  Report report;
  report.checks.push_back(kernel_oracle_agreement(opt));
  report.checks.push_back(delta_identity(opt));
  report.checks.push_back(delta_bounds(opt));
  report.checks.push_back(perimeter_density_bound(opt));
  report.checks.push_back(hole_distance_bounds(opt));
  report.checks.push_back(poisson_reduction(opt));
  report.checks.push_back(sandwich_domination(opt));
  return report;
}

std::string Report::to_json() const {
  nlohmann::json j;
  j["passed"] = all_passed();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json jc;
    jc["name"] = c.name;
    jc["passed"] = c.passed;
    jc["skipped"] = c.skipped;
    jc["details"] = c.details;
    jc["seconds"] = c.seconds;
    j["checks"].push_back(jc);
  }
  return j.dump(2);
}

}  // namespace quermass::validate

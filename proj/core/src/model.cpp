#include "cbp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cbp {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void add(ValidationReport& r, std::string id, bool pass, std::string detail) {
  r.entries.push_back({std::move(id), pass, std::move(detail)});
}

// Largest rank index that any explicit prefix reaches; checks beyond it reduce
// to the tail rules.
std::size_t prefix_horizon(const SystemSpec& s) {
  return std::max({s.drifts.prefix.size(), s.diffusions.prefix.size(),
                   s.q_plus.prefix.size(), s.q_minus.prefix.size()});
}

}  // namespace

double SystemSpec::sigma(std::size_t k) const { return std::sqrt(variance(k)); }

SystemSpec SystemSpec::atlas(std::int64_t size) { return m_atlas(size, 1); }

SystemSpec SystemSpec::m_atlas(std::int64_t size, std::size_t m) {
  SystemSpec s;
  s.size = size;
  s.drifts = ParamSeq::of(std::vector<double>(m, 1.0), 0.0);
  s.diffusions = ParamSeq::constant(1.0);
  s.symmetric = true;
  return s;
}

std::vector<double> InitialConfig::first(std::size_t n) const {
  std::vector<double> out(n);
  for (std::size_t i = 1; i <= n; ++i) out[i - 1] = value(i);
  return out;
}

bool ValidationReport::pass() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const ConditionResult& c) { return c.pass; });
}

const ConditionResult* ValidationReport::find(const std::string& id) const {
  for (const auto& e : entries)
    if (e.id == id) return &e;
  return nullptr;
}

ValidationReport validate_spec(const SystemSpec& spec) {
  ValidationReport r;
  const bool inf = spec.infinite();
  const std::size_t horizon =
      inf ? prefix_horizon(spec) + 2 : static_cast<std::size_t>(spec.size);

  if (!inf && spec.size < 2) {
    add(r, "size", false, "particle count must be >= 2, got " + fmt(double(spec.size)));
  } else {
    add(r, "size", true, inf ? "infinite system" : "N = " + fmt(double(spec.size)));
  }

  // q-chain: q^+_{k+1} + q^-_k = 1. On prefixes this is finitely many checks;
  // past the horizon both sequences are constant, so one identity settles it.
  {
    bool ok = true;
    std::string detail = "q^+_{k+1} + q^-_k = 1 for all k";
    const std::size_t upto = inf ? horizon : horizon - 1;
    for (std::size_t k = 1; k <= upto; ++k) {
      const double s = spec.qplus(k + 1) + spec.qminus(k);
      if (std::abs(s - 1.0) > 1e-15) {
        ok = false;
        detail = "q^+_" + fmt(double(k + 1)) + " + q^-_" + fmt(double(k)) + " = " + fmt(s);
        break;
      }
    }
    add(r, "q-chain", ok, detail);
  }

  // q-range: 0 < q^± < 1 (tail rules must be constant to stay inside).
  {
    bool ok = true;
    std::string detail = "0 < q^± < 1 for all k";
    auto check_range = [&](const ParamSeq& q, const char* name) {
      for (std::size_t k = 1; k <= horizon && ok; ++k) {
        const double v = q.value(k);
        if (!(v > 0.0 && v < 1.0)) {
          ok = false;
          detail = std::string(name) + "_" + fmt(double(k)) + " = " + fmt(v) + " outside (0,1)";
        }
      }
      if (ok && inf && !q.tail.effectively_constant()) {
        ok = false;
        detail = std::string(name) + " tail is unbounded, leaves (0,1)";
      }
    };
    if (!spec.symmetric) {
      check_range(spec.q_plus, "q^+");
      check_range(spec.q_minus, "q^-");
    }
    add(r, "q-range", ok, detail);
  }

  // sigma^2 > 0 everywhere.
  {
    bool ok = true;
    std::string detail = "sigma_k^2 > 0 for all k";
    for (std::size_t k = 1; k <= horizon && ok; ++k) {
      const double v = spec.variance(k);
      if (!(v > 0.0)) {
        ok = false;
        detail = "sigma^2_" + fmt(double(k)) + " = " + fmt(v);
      }
    }
    if (ok && inf && spec.diffusions.tail.inf_from(horizon) <= 0.0) {
      ok = false;
      detail = "sigma^2 tail reaches 0 or below";
    }
    add(r, "sigma-positive", ok, detail);
  }

  if (inf) {
    const double g_inf = spec.drifts.inf();
    add(r, "drift-bounded-below", g_inf > -std::numeric_limits<double>::infinity(),
        "inf_k g_k = " + fmt(g_inf));
    const double s_sup = spec.diffusions.sup();
    add(r, "diffusion-bounded-above", std::isfinite(s_sup),
        "sup_k sigma_k^2 = " + fmt(s_sup));
    // Eventually q^+_n >= 1/2: the tail value decides, with finitely many
    // prefix entries exempt.
    const double q_tail = spec.symmetric ? 0.5
                          : spec.q_plus.tail.effectively_constant()
                              ? spec.q_plus.tail.constant_value()
                              : -1.0;
    add(r, "qplus-eventually-half", q_tail >= 0.5,
        "q^+ tail value = " + fmt(q_tail) + (q_tail >= 0.5 ? " >= 1/2" : " < 1/2"));
  }

  return r;
}

Ranking rank_configuration(const std::vector<double>& x) {
  const std::size_t n = x.size();
  Ranking out;
  out.perm.resize(n);
  std::iota(out.perm.begin(), out.perm.end(), std::size_t{1});
  std::stable_sort(out.perm.begin(), out.perm.end(),
                   [&](std::size_t a, std::size_t b) { return x[a - 1] < x[b - 1]; });
  out.sorted.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.sorted[k] = x[out.perm[k] - 1];
  return out;
}

Ranking rank_configuration(const InitialConfig& cfg) {
  if (!cfg.infinite) return rank_configuration(cfg.prefix);
  if (!cfg.tail.diverges_to_plus_infinity())
    throw Error(Errc::NotRankable, "tail rule does not diverge to +infinity");

  // Extend the window until every later tail value strictly exceeds what has
  // been seen; the tail is monotone up there, so ranks beyond are identity.
  const double prefix_max =
      cfg.prefix.empty() ? -std::numeric_limits<double>::infinity()
                         : *std::max_element(cfg.prefix.begin(), cfg.prefix.end());
  std::size_t m = cfg.prefix.size();
  double window_max = prefix_max;
  while (true) {
    const double next = cfg.value(m + 1);
    if (next > window_max && cfg.tail.nondecreasing_from(m + 1)) break;
    window_max = std::max(window_max, next);
    ++m;
    if (m > cfg.prefix.size() + (1u << 22))
      throw Error(Errc::NotRankable, "tail diverges too slowly to certify a ranking window");
  }
  Ranking head = rank_configuration(cfg.first(m));
  return head;
}

ValidationReport check_initial_admissible(const InitialConfig& cfg) {
  ValidationReport r;
  if (!cfg.infinite) {
    add(r, "seriesalpha", true, "finite configuration: series is a finite sum");
    if (cfg.kind == InitialConfig::Kind::Ranked)
      add(r, "gapnice", true, "finite configuration");
    return r;
  }

  const bool diverges = cfg.tail.diverges_to_plus_infinity();
  add(r, "tail-diverges", diverges,
      diverges ? "tail -> +infinity" : "tail does not diverge to +infinity");

  const bool series = diverges && cfg.tail.gaussian_series_admissible();
  add(r, "seriesalpha", series,
      series ? "sum exp(-alpha x_i^2) < infinity for every alpha > 0"
             : "sum exp(-alpha x_i^2) diverges for some alpha > 0");

  if (cfg.kind == InitialConfig::Kind::Ranked) {
    bool sorted = std::is_sorted(cfg.prefix.begin(), cfg.prefix.end());
    if (sorted && !cfg.prefix.empty()) {
      // The first tail value must not undercut the prefix.
      sorted = cfg.value(cfg.prefix.size() + 1) >= cfg.prefix.back() &&
               cfg.tail.nondecreasing_from(cfg.prefix.size() + 1);
    } else if (sorted) {
      sorted = cfg.tail.nondecreasing_from(1);
    }
    add(r, "ranked-nondecreasing", sorted,
        sorted ? "y_k <= y_{k+1}" : "positions are not nondecreasing");
    // For nondecreasing y the partial-gap-sum condition is equivalent to
    // seriesalpha on y itself.
    add(r, "gapnice", series && sorted,
        "partial gap sums inherit the verdict from the position series");
  }
  return r;
}

std::vector<double> gaps_from_positions(const std::vector<double>& y) {
  std::vector<double> z;
  if (y.empty()) return z;
  z.reserve(y.size() - 1);
  for (std::size_t k = 0; k + 1 < y.size(); ++k) {
    const double g = y[k + 1] - y[k];
    if (g < 0.0)
      throw Error(Errc::NegativeGap,
                  "positions not nondecreasing at index " + std::to_string(k + 1));
    z.push_back(g);
  }
  return z;
}

std::vector<double> positions_from_gaps(double y1, const std::vector<double>& z) {
  std::vector<double> y(z.size() + 1);
  y[0] = y1;
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (z[k] < 0.0)
      throw Error(Errc::NegativeGap, "gap " + std::to_string(k + 1) + " is negative");
    y[k + 1] = y[k] + z[k];
  }
  return y;
}

}  // namespace cbp

#include "resbdy/solver.hpp"

namespace resbdy {

namespace {

nlohmann::json finite_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

nlohmann::json array_of(const std::vector<double>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : v) a.push_back(finite_or_null(x));
  return a;
}

}  // namespace

nlohmann::json ConvergenceReport::to_json() const {
  nlohmann::json j;
  j["quantity"] = quantity;
  j["radii"] = radii;
  j["sizes"] = sizes;
  j["values"] = array_of(values);
  j["relative_deltas"] = array_of(deltas);
  if (!accelerated.empty()) j["accelerated"] = array_of(accelerated);
  j["log10_window_defect"] = array_of(log10_defect);
  j["residuals"] = array_of(residuals);
  j["converged"] = converged;
  j["diverged"] = diverged;
  j["converged_at_level"] = converged_at;
  j["limit"] = finite_or_null(limit);
  j["stopping_rule"] = stopping_rule;
  j["precision"] = precision;
  return j;
}

nlohmann::json IndependenceReport::to_json() const {
  return {{"value_a", finite_or_null(value_a)},
          {"value_b", finite_or_null(value_b)},
          {"agree", agree},
          {"schedule_a", report_a.to_json()},
          {"schedule_b", report_b.to_json()}};
}

ConvergenceMonitor::ConvergenceMonitor(std::string quantity, Mode mode, const SolverOptions& opt)
    : mode_(mode), opt_(opt) {
  report_.quantity = std::move(quantity);
}

double ConvergenceMonitor::rel_delta(double a, double b) {
  double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

bool ConvergenceMonitor::push(Index radius, Index size, double value, double log10_defect, double residual,
                              bool saturated) {
  auto& r = report_;
  if (done()) {
    // Keep the telemetry but never revoke a fired rule.
    r.radii.push_back(radius);
    r.sizes.push_back(size);
    r.values.push_back(value);
    r.deltas.push_back(rel_delta(value, r.values[r.values.size() - 2]));
    r.log10_defect.push_back(log10_defect);
    r.residuals.push_back(residual);
    if (mode_ == Mode::Accelerated) r.accelerated.push_back(r.accelerated.back());
    return true;
  }
  r.radii.push_back(radius);
  r.sizes.push_back(size);
  r.values.push_back(value);
  r.log10_defect.push_back(log10_defect);
  r.residuals.push_back(residual);
  const std::size_t m = r.values.size();
  r.deltas.push_back(m >= 2 ? rel_delta(r.values[m - 1], r.values[m - 2]) : std::numeric_limits<double>::quiet_NaN());

  if (saturated) {
    r.converged = true;
    r.converged_at = static_cast<Index>(m) - 1;
    r.limit = value;
    r.stopping_rule = "window-saturated";
    return true;
  }

  auto three_small = [&](const std::vector<double>& seq) {
    if (seq.size() < 4) return false;
    for (std::size_t i = seq.size() - 3; i < seq.size(); ++i)
      if (!(rel_delta(seq[i], seq[i - 1]) < opt_.tol_limit)) return false;
    return true;
  };

  if (three_small(r.values)) {
    r.converged = true;
    r.converged_at = static_cast<Index>(m) - 1;
    r.limit = value;
    r.stopping_rule = "three-relative-deltas";
  }

  if (mode_ == Mode::Accelerated) {
    double a = value;
    if (m >= 3) {
      double d1 = r.values[m - 2] - r.values[m - 3];
      double d2 = r.values[m - 1] - r.values[m - 2];
      double dd = d2 - d1;
      // Aitken's delta-squared only on contracting tails.
      if (d1 != 0.0 && std::abs(d2 / d1) < 0.95 && dd != 0.0) a = value - d2 * d2 / dd;
    }
    r.accelerated.push_back(a);
    if (!r.converged) {
      // Only extrapolated values from contracting triples count.
      bool ok = r.accelerated.size() >= 6 && three_small(r.accelerated);
      if (ok) {
        r.converged = true;
        r.converged_at = static_cast<Index>(m) - 1;
        r.limit = a;
        r.stopping_rule = "three-relative-deltas-aitken";
      }
    }
  }

  if (!r.converged && divergence_ && m >= 3 && value > opt_.divergence_threshold && r.values[m - 1] > r.values[m - 2] &&
      r.values[m - 2] > r.values[m - 3]) {
    r.diverged = true;
    r.stopping_rule = "divergence-threshold";
  }
  return done();
}

}  // namespace resbdy

namespace resbdy {

RadiusSchedule default_schedule(const NetworkGenerator& gen, bool monopole) {
  switch (gen.family) {
    case Family::FiniteExplicit: {
      Graph g = materialize(gen, 1);
      return RadiusSchedule::linear(1, 1, g.max_radius() + 1);
    }
    case Family::Lattice:
      return monopole ? RadiusSchedule::geometric(2, 2.0, 21) : RadiusSchedule::linear(1, 1, 60);
    case Family::BinaryTree:
      return RadiusSchedule::linear(1, 1, 16);
    default:
      return RadiusSchedule::linear(1, 1, 240);
  }
}

}  // namespace resbdy

#include "abmc/lfree.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace abmc::lfree {

ParamVec PilotCalibration::best_start(const Vector& s0) const {
  DistanceSpec spec{scaling, 0.0};
  long best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (long i = 0; i < pilot_summaries.rows(); ++i) {
    const double d = spec.distance(pilot_summaries.row(i).transpose(), s0);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return pilot_params[static_cast<size_t>(best)];
}

double PilotCalibration::epsilon_for(const Vector& s0, double quantile_level) const {
  DistanceSpec spec{scaling, 0.0};
  std::vector<double> dists(static_cast<size_t>(pilot_summaries.rows()));
  for (long i = 0; i < pilot_summaries.rows(); ++i) {
    dists[static_cast<size_t>(i)] = spec.distance(pilot_summaries.row(i).transpose(), s0);
  }
  return quantile(dists, quantile_level);
}

void save_pilot_json(const PilotCalibration& cal, const std::string& path) {
  nlohmann::json j;
  j["scaling"] = std::vector<double>(cal.scaling.data(), cal.scaling.data() + cal.scaling.size());
  j["epsilon"] = cal.epsilon;
  j["epsilon_quantile"] = cal.epsilon_quantile;
  j["pilot_size"] = cal.pilot_size;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_pilot_json: cannot open " + path);
  out << j.dump(2) << "\n";
}

PilotCalibration load_pilot_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_pilot_json: cannot open " + path);
  nlohmann::json j;
  in >> j;
  PilotCalibration cal;
  const auto sc = j.at("scaling").get<std::vector<double>>();
  cal.scaling = Eigen::Map<const Vector>(sc.data(), static_cast<long>(sc.size()));
  cal.epsilon = j.at("epsilon").get<double>();
  cal.epsilon_quantile = j.value("epsilon_quantile", 0.05);
  cal.pilot_size = j.value("pilot_size", 0L);
  return cal;
}

}  // namespace abmc::lfree

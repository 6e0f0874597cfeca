#include "turnover/io.hpp"

#include <fstream>
#include <sstream>

namespace turnover {

namespace {

std::vector<double> number_array(const Json& doc, const char* key) {
  const auto& node = doc.at(key);
  if (!node.is_array()) throw Error(ErrorKind::InvalidArgument, std::string(key) + " must be an array");
  std::vector<double> out;
  for (const auto& v : node) {
    if (!v.is_number()) throw Error(ErrorKind::InvalidArgument, std::string(key) + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

double positive_number(const Json& node, const char* key) {
  if (!node.is_number()) throw Error(ErrorKind::InvalidArgument, std::string(key) + " must be a number");
  return node.get<double>();
}

Json bools(const std::vector<bool>& flags) {
  Json arr = Json::array();
  for (bool f : flags) arr.push_back(f);
  return arr;
}

}  // namespace

RunConfig parse_config(const Json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::InvalidArgument, "config must be a JSON object");
  RunConfig config;
  try {
    auto& model = config.model;
    model.strategies.b = number_array(doc, "b");
    model.strategies.d = number_array(doc, "d");
    if (doc.contains("k")) {
      if (!doc["k"].is_number_integer() || doc["k"].get<long long>() <= 0) {
        throw Error(ErrorKind::InvalidArgument, "k must be a positive integer");
      }
      model.k = doc["k"].get<std::size_t>();
    } else {
      model.k = model.strategies.b.size();
    }
    const auto& kernel_doc = doc.at("kernel");
    if (!kernel_doc.is_object()) throw Error(ErrorKind::InvalidArgument, "kernel must be an object");
    auto& kernel = model.kernel;
    kernel.family = kernel_family_from_string(kernel_doc.at("type").get<std::string>());
    if (kernel_doc.contains("K")) kernel.K = positive_number(kernel_doc["K"], "K");
    if (kernel_doc.contains("c")) kernel.c = positive_number(kernel_doc["c"], "c");
    if (kernel_doc.contains("weights")) {
      kernel.weights = number_array(kernel_doc, "weights");
    } else if (doc.contains("weights")) {
      kernel.weights = number_array(doc, "weights");
    }
    if (doc.contains("continuous")) config.continuous = doc["continuous"].get<bool>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("config: ") + e.what());
  }
  return config;
}

RunConfig validated(RunConfig config) {
  config.model = validate_model(std::move(config.model),
                                config.continuous ? RateMode::Continuous : RateMode::Discrete);
  return config;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open config file " + path);
  Json doc;
  try {
    in >> doc;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, "config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(doc);
}

Json to_json(const RunConfig& config) {
  const auto& m = config.model;
  Json kernel = {{"type", std::string(to_string(m.kernel.family))}};
  switch (m.kernel.family) {
    case KernelFamily::Logistic:
    case KernelFamily::NestSite: kernel["K"] = m.kernel.K; break;
    case KernelFamily::BevertonHolt:
    case KernelFamily::Ricker: kernel["c"] = m.kernel.c; break;
  }
  if (m.kernel.has_profile()) {
    std::vector<double> w(m.k);
    for (std::size_t i = 0; i < m.k; ++i) w[i] = m.kernel.weight(i);
    kernel["weights"] = w;
  }
  return Json{{"k", m.k},
              {"b", m.strategies.b},
              {"d", m.strategies.d},
              {"kernel", kernel},
              {"continuous", config.continuous}};
}

Json to_json(const ExclusionReport& report) {
  Json pairs = Json::array();
  for (const auto& p : report.pairs) {
    pairs.push_back({{"i", p.i + 1},
                     {"alpha", p.coeff.alpha},
                     {"beta", p.coeff.beta},
                     {"gamma", p.coeff.gamma},
                     {"excluded", p.excluded}});
  }
  return Json{{"L", report.L},
              {"dominant", report.dominant + 1},
              {"pairs", pairs},
              {"ties", false},
              {"note", report.note}};
}

Json to_json(const Period2Result& result) {
  Json conditions = Json::object();
  conditions["ewko"] = result.ewko ? Json(*result.ewko) : Json(nullptr);
  conditions["ewkw3"] = result.ewkw3 ? Json(*result.ewkw3) : Json(nullptr);
  if (!result.orbit) {
    Json out{{"orbit", nullptr}, {"failed", result.failed}, {"conditions", conditions}};
    out["alpha"] = result.coeff.alpha;
    out["beta"] = result.coeff.beta;
    out["gamma"] = result.coeff.gamma;
    if (result.theta) out["theta"] = *result.theta;
    return out;
  }
  const auto& o = *result.orbit;
  return Json{{"theta", o.theta},
              {"c1", o.c1},
              {"c2", o.c2},
              {"odd", o.point_odd},
              {"even", o.point_even},
              {"residual", o.residual},
              {"conditions", conditions},
              {"alpha", o.coeff.alpha},
              {"beta", o.coeff.beta},
              {"gamma", o.coeff.gamma},
              {"m1", o.m1},
              {"m2", o.m2},
              {"p1", o.p1},
              {"p2", o.p2},
              {"dominant", result.dominant + 1}};
}

Json to_json(const OrbitPair& pair) {
  return Json{{"p", pair.p}, {"q", pair.q}, {"residual", pair.residual}};
}

Json to_json(const FeasibilityReport& report) {
  Json out{{"applicable", report.applicable}, {"form", report.form}};
  if (report.applicable) {
    out["holds"] = report.holds;
    out["A"] = report.A;
    out["B"] = report.B;
    out["lower_gap"] = report.lower_gap;
    out["upper_gap"] = report.upper_gap;
    out["margin"] = report.margin;
  }
  return out;
}

Json to_json(const FixedPointReport& report) {
  return Json{{"r", report.r},
              {"point", report.point},
              {"eigenvalues", report.eigenvalues},
              {"class", std::string(to_string(report.classification.stability))},
              {"marginal", report.classification.marginal},
              {"derivative_term", report.derivative_term}};
}

Json to_json(const ConsistencyReport& report) {
  Json condition = Json::array();
  for (const auto& c : report.condition) {
    condition.push_back({{"i", c.i + 1}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}});
  }
  auto side = [](const SideVerdict& s) {
    return Json{{"extinct", bools(s.extinct)}, {"converged", s.converged}, {"final", s.final_state}};
  };
  return Json{{"h", report.euler.h},
              {"h_max", report.euler.h_max},
              {"valid", report.euler.valid},
              {"discrete_b", report.euler.b},
              {"discrete_d", report.euler.d},
              {"continuous", side(report.continuous)},
              {"discrete", side(report.discrete)},
              {"condition", condition},
              {"extinction_agree", report.extinction_agree},
              {"convergence_agree", report.convergence_agree},
              {"consistent", report.consistent}};
}

}  // namespace turnover

#include "georev/report_io.hpp"

#include <cmath>
#include <cstdio>

namespace georev::report {

using nlohmann::ordered_json;

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

ordered_json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  // Round through the fixed textual form so JSON numbers match the CSV's
  // 10-significant-digit convention.
  return std::strtod(format_number(v).c_str(), nullptr);
}

ordered_json to_json(const FunctionalResult& r) {
  ordered_json j;
  j["value"] = json_number(r.value);
  j["method"] = method_name(r.method);
  j["std_err"] = json_number(r.std_err);
  if (r.sample_count > 0) j["samples"] = r.sample_count;
  return j;
}

ordered_json to_json(const RevenueEstimate& est) {
  ordered_json j;
  j["method"] = "monte_carlo";
  j["mean"] = json_number(est.mean);
  j["std_err"] = json_number(est.std_err);
  j["ci95_lo"] = json_number(est.ci_lo);
  j["ci95_hi"] = json_number(est.ci_hi);
  j["samples"] = est.samples;
  j["seed"] = est.seed;
  j["welfare_mean"] = json_number(est.welfare_mean);
  j["welfare_std_err"] = json_number(est.welfare_std_err);
  if (est.blocks) {
    j["original_block_mean"] = json_number((*est.blocks)[0].mean);
    j["original_block_std_err"] = json_number((*est.blocks)[0].std_err);
    j["replica_block_mean"] = json_number((*est.blocks)[1].mean);
    j["replica_block_std_err"] = json_number((*est.blocks)[1].std_err);
  }
  return j;
}

ordered_json to_json(const ChainLink& link) {
  ordered_json j;
  j["name"] = link.name;
  j["lhs"] = json_number(link.lhs);
  j["rhs"] = json_number(link.rhs);
  j["margin"] = json_number(link.margin);
  j["sigma"] = json_number(link.sigma);
  j["verdict"] = verdict_name(link.verdict);
  return j;
}

ordered_json to_json(const BoundReport& rep) {
  ordered_json j;
  j["bound"] = bound_name(rep.bound);
  j["model"] = rep.model;
  j["verdict"] = verdict_name(rep.verdict);
  j["lhs"] = to_json(rep.lhs);
  j["rhs"] = to_json(rep.rhs);
  j["margin"] = json_number(rep.margin);
  j["sigma"] = json_number(rep.sigma);
  j["seed"] = rep.seed;
  j["budget"] = rep.budget;
  if (!rep.detail.empty()) j["detail"] = rep.detail;
  if (!rep.links.empty()) {
    ordered_json links = ordered_json::array();
    for (const auto& link : rep.links) links.push_back(to_json(link));
    j["links"] = links;
  }
  return j;
}

ordered_json report_document(const std::vector<BoundReport>& reports) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  ordered_json checks = ordered_json::array();
  for (const auto& rep : reports) checks.push_back(to_json(rep));
  doc["checks"] = checks;
  return doc;
}

std::string reports_to_csv(const std::vector<BoundReport>& reports) {
  std::string csv =
      "model,bound,verdict,lhs,lhs_std_err,lhs_method,rhs,rhs_std_err,"
      "rhs_method,margin,sigma,seed,budget\n";
  for (const auto& r : reports) {
    csv += '"' + r.model + "\"," + bound_name(r.bound) + ',' +
           verdict_name(r.verdict) + ',' + format_number(r.lhs.value) + ',' +
           format_number(r.lhs.std_err) + ',' + method_name(r.lhs.method) +
           ',' + format_number(r.rhs.value) + ',' +
           format_number(r.rhs.std_err) + ',' + method_name(r.rhs.method) +
           ',' + format_number(r.margin) + ',' + format_number(r.sigma) + ',' +
           std::to_string(r.seed) + ',' + std::to_string(r.budget) + '\n';
  }
  return csv;
}

}  // namespace georev::report

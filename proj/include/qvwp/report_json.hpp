#pragma once

#include <json.hpp>

#include "idcheck.hpp"
#include "rational.hpp"

namespace qvwp {

inline nlohmann::json to_json(const IdentityReport& r) {
  nlohmann::json j;
  j["identity_id"] = r.identity_id;
  j["seed"] = r.seed;
  j["points_requested"] = r.points_requested;
  j["points_evaluated"] = r.points_evaluated;
  j["points_skipped"] = r.points_skipped;
  j["max_abs_residual"] = r.max_abs_residual;
  j["max_rel_residual"] = r.max_rel_residual;
  j["worst_point"] = {
      {"x", {r.worst_point.x.real(), r.worst_point.x.imag()}},
      {"z", {r.worst_point.z.real(), r.worst_point.z.imag()}},
      {"params",
       {{"kappa", r.worst_point.params.kappa},
        {"lambda", r.worst_point.params.lambda},
        {"upsilon", r.worst_point.params.upsilon},
        {"varsigma", r.worst_point.params.varsigma},
        {"q", r.worst_point.params.q},
        {"s", r.worst_point.params.s.str()}}}};
  j["passed"] = r.passed;
  return j;
}

inline IdentityReport report_from_json(const nlohmann::json& j) {
  IdentityReport r;
  r.identity_id = j.at("identity_id").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.points_requested = j.at("points_requested").get<int>();
  r.points_evaluated = j.at("points_evaluated").get<int>();
  r.points_skipped = j.at("points_skipped").get<int>();
  r.max_abs_residual = j.at("max_abs_residual").get<double>();
  r.max_rel_residual = j.at("max_rel_residual").get<double>();
  const auto& wp = j.at("worst_point");
  r.worst_point.x = {wp.at("x")[0].get<double>(), wp.at("x")[1].get<double>()};
  r.worst_point.z = {wp.at("z")[0].get<double>(), wp.at("z")[1].get<double>()};
  const auto& pp = wp.at("params");
  r.worst_point.params.kappa = pp.at("kappa").get<double>();
  r.worst_point.params.lambda = pp.at("lambda").get<double>();
  r.worst_point.params.upsilon = pp.at("upsilon").get<double>();
  r.worst_point.params.varsigma = pp.at("varsigma").get<double>();
  r.worst_point.params.q = pp.at("q").get<double>();
  r.worst_point.params.s = Rational::parse(pp.at("s").get<std::string>());
  r.passed = j.at("passed").get<bool>();
  return r;
}

}  // namespace qvwp

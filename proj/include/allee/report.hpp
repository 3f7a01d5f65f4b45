#pragma once

#include "allee/equilibria.hpp"
#include "allee/focal.hpp"
#include "allee/normalform.hpp"
#include "allee/simulate.hpp"

#include <json.hpp>

#include <string>

namespace allee {

using json = nlohmann::json;

inline json surd_json(const QSurd& v) { return {{"exact", v.str()}, {"value", v.to_double()}}; }

inline json params_json(const Params<Rational>& p) {
  return {{"alpha", str(p.alpha)}, {"beta", str(p.beta)}, {"gamma", str(p.gamma)}, {"delta", str(p.delta)},
          {"eta", str(p.eta)}};
}

inline json params_json(const Params<double>& p) {
  return {{"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}, {"delta", p.delta}, {"eta", p.eta}};
}

inline json to_json(const EquilibriumReport& e) {
  json j{{"name", e.name},
         {"x", surd_json(e.x)},
         {"y", surd_json(e.y)},
         {"kind", kind_name(e.kind)},
         {"trace", surd_json(e.trace)},
         {"det", surd_json(e.det)},
         {"discriminant", surd_json(e.discriminant)}};
  if (e.kind == Kind::SaddleNode) j["sector"] = sector_name(e.sector);
  if (e.center_manifold_coeff) j["center_manifold_coeff"] = surd_json(*e.center_manifold_coeff);
  return j;
}

inline json root_json(const std::optional<ScaledRoot>& r) {
  if (!r) return nullptr;
  return {{"exact", r->str()}, {"value", r->to_double()}};
}

inline json to_json(const CuspReport& r) {
  json j{{"d20", str(r.d20)}, {"d11", str(r.d11)}, {"M", root_json(r.M)}, {"N", root_json(r.N)},
         {"codim", r.codim_tag()}};
  j["rho1"] = r.rho1 ? json(str(*r.rho1)) : json(nullptr);
  j["rho2"] = r.rho2 ? json(str(*r.rho2)) : json(nullptr);
  return j;
}

inline json to_json(const CuspLocus& c) {
  return {{"gamma", str(c.gamma)},   {"eta", str(c.eta)},     {"alpha0", str(c.alpha0)},
          {"beta0", str(c.beta0)},   {"delta0", str(c.delta0)}, {"eta0", str(c.eta0)}};
}

inline json to_json(const UnfoldingReport& u) {
  json jac = json::array();
  for (const auto& row : u.jac) {
    json r = json::array();
    for (const auto& v : row) r.push_back(static_cast<double>(v));
    jac.push_back(r);
  }
  json chi = json::array();
  for (const auto& v : u.chi0) chi.push_back(static_cast<double>(v));
  return {{"gamma", str(u.gamma)},
          {"chi_at_zero", chi},
          {"jacobian", jac},
          {"det", static_cast<double>(u.jac_det)},
          {"det_half_step", static_cast<double>(u.jac_det_half)},
          {"step", static_cast<double>(u.step)},
          {"relative_change", u.relative_change()},
          {"m20", static_cast<double>(u.m20)},
          {"m41", static_cast<double>(u.m41)},
          {"nonsingular", u.nonsingular()}};
}

inline json to_json(const FocalReport& f) {
  return {{"exact", f.exact},
          {"numerators", f.numerators},
          {"numerators_value", f.numerators_d},
          {"values", f.values},
          {"order", f.order}};
}

inline json to_json(const LimitCycle& c) {
  return {{"section_point", {c.section_point.x, c.section_point.y}},
          {"radius", c.radius},
          {"period", c.period},
          {"stability", c.stability == CycleStability::Attracting ? "attracting" : "repelling"},
          {"floquet_slope", c.floquet_slope},
          {"residual", c.residual}};
}

inline json to_json(const BoundednessReport& b) {
  json times = json::array();
  for (double t : b.entry_times) times.push_back(std::isnan(t) ? json(nullptr) : json(t));
  return {{"entered_gamma_region", b.entered_gamma_region}, {"entry_times", times}, {"all_ok", b.all_ok()}};
}

}  // namespace allee

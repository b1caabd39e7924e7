#pragma once

#include <json.hpp>

#include "ostop/free_boundary.hpp"
#include "ostop/mc.hpp"
#include "ostop/verification.hpp"

// JSON views of the report types. Field-for-field round trips are part
// of the contract: parse(dump(x)) reconstructs x exactly (doubles are
// emitted with enough digits to round-trip).

namespace ostop {

inline void to_json(nlohmann::json& j, const ThresholdSolution& s) {
    j = nlohmann::json{{"example", std::string(to_string(s.example))},
                       {"alpha", s.alpha},
                       {"u", s.u},
                       {"x0", s.x0},
                       {"status", std::string(to_string(s.status))},
                       {"residual", s.residual}};
    if (!s.note.empty()) j["note"] = s.note;
}

inline void from_json(const nlohmann::json& j, ThresholdSolution& s) {
    const auto example = parse_example(j.at("example").get<std::string>());
    if (!example) throw std::invalid_argument("unknown example name");
    s.example = *example;
    j.at("alpha").get_to(s.alpha);
    j.at("u").get_to(s.u);
    j.at("x0").get_to(s.x0);
    const auto status = j.at("status").get<std::string>();
    if (status == "ClosedForm") s.status = ThresholdStatus::ClosedForm;
    else if (status == "RootFound") s.status = ThresholdStatus::RootFound;
    else if (status == "NoPositiveRoot") s.status = ThresholdStatus::NoPositiveRoot;
    else throw std::invalid_argument("unknown threshold status");
    j.at("residual").get_to(s.residual);
    s.note = j.value("note", std::string{});
}

inline void to_json(nlohmann::json& j, const McEstimate& e) {
    j = nlohmann::json{{"mean", e.mean},
                       {"stderr", e.std_error},
                       {"paths", e.paths_used},
                       {"truncation_bound", e.truncation_bound}};
}

inline void from_json(const nlohmann::json& j, McEstimate& e) {
    j.at("mean").get_to(e.mean);
    j.at("stderr").get_to(e.std_error);
    j.at("paths").get_to(e.paths_used);
    j.at("truncation_bound").get_to(e.truncation_bound);
}

inline void to_json(nlohmann::json& j, const SweepPoint& p) {
    j = nlohmann::json{{"threshold", p.threshold}, {"estimate", p.estimate}};
}

inline void from_json(const nlohmann::json& j, SweepPoint& p) {
    j.at("threshold").get_to(p.threshold);
    j.at("estimate").get_to(p.estimate);
}

inline void to_json(nlohmann::json& j, const SweepResult& s) {
    j = nlohmann::json{{"points", s.points},
                       {"argmax_index", s.argmax_index},
                       {"argmax_gap_z", s.argmax_gap_z}};
}

inline void from_json(const nlohmann::json& j, SweepResult& s) {
    j.at("points").get_to(s.points);
    j.at("argmax_index").get_to(s.argmax_index);
    j.at("argmax_gap_z").get_to(s.argmax_gap_z);
}

inline void to_json(nlohmann::json& j, const RegionInterval& i) {
    j = nlohmann::json{{"lo", i.lo},
                       {"hi", i.hi},
                       {"lo_closed", i.lo_closed},
                       {"hi_closed", i.hi_closed}};
}

inline void from_json(const nlohmann::json& j, RegionInterval& i) {
    j.at("lo").get_to(i.lo);
    j.at("hi").get_to(i.hi);
    j.at("lo_closed").get_to(i.lo_closed);
    j.at("hi_closed").get_to(i.hi_closed);
}

inline void to_json(nlohmann::json& j, const ContinuationRegion& r) {
    j = nlohmann::json{{"intervals", r.intervals}};
    if (r.threshold) j["threshold"] = *r.threshold;
}

inline void from_json(const nlohmann::json& j, ContinuationRegion& r) {
    j.at("intervals").get_to(r.intervals);
    if (j.contains("threshold"))
        r.threshold = j.at("threshold").get<double>();
    else
        r.threshold.reset();
}

inline void to_json(nlohmann::json& j, const ConditionCheck& c) {
    j = nlohmann::json{{"pass", c.pass}, {"worst", c.worst}};
}

inline void from_json(const nlohmann::json& j, ConditionCheck& c) {
    j.at("pass").get_to(c.pass);
    j.at("worst").get_to(c.worst);
}

inline void to_json(nlohmann::json& j, const BoundaryCheck& b) {
    j = nlohmann::json{{"location", b.location},
                       {"jump", b.jump},
                       {"derivative_gap", b.derivative_gap},
                       {"continuity_pass", b.continuity_pass},
                       {"pasting_pass", b.pasting_pass}};
}

inline void from_json(const nlohmann::json& j, BoundaryCheck& b) {
    j.at("location").get_to(b.location);
    j.at("jump").get_to(b.jump);
    j.at("derivative_gap").get_to(b.derivative_gap);
    j.at("continuity_pass").get_to(b.continuity_pass);
    j.at("pasting_pass").get_to(b.pasting_pass);
}

inline void to_json(nlohmann::json& j, const VerificationReport& r) {
    j = nlohmann::json{
        {"value_geq_terminal", r.value_dominates_terminal},
        {"psi_geq_running", r.psi_dominates_running},
        {"psi_eq_running_on_region", r.psi_matches_running_on_region},
        {"continuity", {{"pass", r.continuity_pass}, {"worst_jump", r.worst_jump}}},
        {"smooth_pasting",
         {{"pass", r.smooth_pasting_pass},
          {"worst_gap", r.worst_derivative_gap}}},
        {"boundaries", r.boundaries},
        {"region", r.region},
        {"grid", r.grid},
        {"tol_value", r.tol_value},
        {"tol_derivative", r.tol_derivative},
        {"all_pass", r.all_pass()}};
}

inline void from_json(const nlohmann::json& j, VerificationReport& r) {
    j.at("value_geq_terminal").get_to(r.value_dominates_terminal);
    j.at("psi_geq_running").get_to(r.psi_dominates_running);
    j.at("psi_eq_running_on_region").get_to(r.psi_matches_running_on_region);
    j.at("continuity").at("pass").get_to(r.continuity_pass);
    j.at("continuity").at("worst_jump").get_to(r.worst_jump);
    j.at("smooth_pasting").at("pass").get_to(r.smooth_pasting_pass);
    j.at("smooth_pasting").at("worst_gap").get_to(r.worst_derivative_gap);
    j.at("boundaries").get_to(r.boundaries);
    j.at("region").get_to(r.region);
    j.at("grid").get_to(r.grid);
    j.at("tol_value").get_to(r.tol_value);
    j.at("tol_derivative").get_to(r.tol_derivative);
}

}  // namespace ostop

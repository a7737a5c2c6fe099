#pragma once

#include <json.hpp>
#include <string>

#include "dmod/error.hpp"
#include "dmod/formal.hpp"
#include "dmod/global.hpp"
#include "dmod/tate.hpp"
#include "dmod/transforms.hpp"

namespace dmod {

using nlohmann::json;

// Rationals travel as "p/q" strings; series terms as
// [exp_num, exp_den, coeff_num, coeff_den] quadruples.

inline json int_json(const Int& v) {
    if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
        return static_cast<long long>(v);
    return v.str();
}

inline Int int_from_json(const json& j) {
    if (j.is_number_integer()) return Int(j.get<long long>());
    if (j.is_string()) return Int(j.get<std::string>());
    fail(errc::bad_input, "expected an integer, got " + j.dump());
}

inline json rat_json(const Rat& r) { return rat_str(r); }

inline Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_string()) return parse_rat(j.get<std::string>());
    fail(errc::bad_input, "expected a rational, got " + j.dump());
}

inline json series_terms_json(const Series& s) {
    json terms = json::array();
    for (const auto& [e, c] : s.c)
        terms.push_back({int_json(rat_num(e)), int_json(rat_den(e)), int_json(rat_num(c)),
                         int_json(rat_den(c))});
    return terms;
}

inline json series_json(const Series& s) {
    json j;
    j["ram"] = s.ram;
    j["terms"] = series_terms_json(s);
    j["trunc"] = s.trunc ? rat_json(*s.trunc) : json(nullptr);
    return j;
}

inline Series series_terms_from_json(const json& terms, long ram) {
    Series s;
    s.ram = ram;
    for (const auto& q : terms) {
        if (!q.is_array() || q.size() != 4)
            fail(errc::bad_input, "series terms must be [en, ed, cn, cd] quadruples");
        Rat e(int_from_json(q[0]), int_from_json(q[1]));
        Rat c(int_from_json(q[2]), int_from_json(q[3]));
        s.c[e] += c;
    }
    return normalized(std::move(s));
}

inline Series series_from_json(const json& j) {
    Series s = series_terms_from_json(j.at("terms"), j.value("ram", 1L));
    if (j.contains("trunc") && !j["trunc"].is_null()) s.trunc = rat_from_json(j["trunc"]);
    return normalized(std::move(s));
}

inline json elementary_json(const ElementaryModule& e) {
    json j;
    j["ram"] = e.ram;
    j["exp"] = series_terms_json(e.f);
    j["residue"] = rat_json(e.residue);
    j["unip"] = e.unip;
    return j;
}

inline ElementaryModule elementary_from_json(const json& j) {
    ElementaryModule e;
    e.ram = j.value("ram", 1L);
    e.f = series_terms_from_json(j.value("exp", json::array()), e.ram);
    e.residue = j.contains("residue") ? rat_from_json(j["residue"]) : Rat(0);
    e.unip = j.value("unip", 1L);
    return e;
}

inline json module_json(const FormalModule& m) {
    json comps = json::array();
    for (const auto& e : m.comps) comps.push_back(elementary_json(e));
    return json{{"components", comps}};
}

inline FormalModule module_from_json(const json& j) {
    FormalModule m;
    if (!j.contains("components"))
        fail(errc::bad_input, "module document needs a \"components\" list");
    for (const auto& c : j["components"]) m.comps.push_back(elementary_from_json(c));
    return m;  // deliberately not canonicalized; callers decide
}

inline json operator_json(const DifferentialOperator& op) {
    json coeffs = json::array();
    for (const auto& a : op.coeff) coeffs.push_back(series_json(a));
    return json{{"coeffs", coeffs}};
}

inline DifferentialOperator operator_from_json(const json& j) {
    DifferentialOperator op;
    for (const auto& c : j.at("coeffs")) op.coeff.push_back(series_from_json(c));
    return op;
}

inline json slopes_json(const std::vector<std::pair<Rat, long>>& slopes) {
    json out = json::array();
    for (const auto& [s, mult] : slopes)
        out.push_back({rat_num(s).str(), rat_den(s).str(), mult});
    return out;
}

inline json oracle_report_json(const OracleReport& rep) {
    json j;
    j["rank"] = rep.rank_out;
    j["slopes"] = slopes_json(rep.newton.slopes);
    j["operator"] = operator_json(rep.op);
    if (rep.residue_out) j["residue"] = rat_json(*rep.residue_out);
    j["precision"] = rep.precision;
    return j;
}

inline json formal_type_json(const FormalType& ft) {
    json pts = json::array();
    for (const auto& p : ft.points)
        pts.push_back(json{{"label", p.label}, {"degree", p.degree}, {"psi", module_json(p.psi)}});
    return json{{"genus", ft.genus}, {"rank", ft.rank}, {"points", pts}};
}

inline FormalType formal_type_from_json(const json& j) {
    FormalType ft;
    ft.genus = j.value("genus", 0L);
    ft.rank = j.value("rank", 1L);
    for (const auto& p : j.value("points", json::array()))
        ft.points.push_back(make_point(p.at("label").get<std::string>(), p.value("degree", 1L),
                                       module_from_json(p.at("psi"))));
    validate(ft);
    return ft;
}

inline json bookkeeping_json(const TransformBookkeeping& b) {
    json j;
    j["mode"] = "bookkeeping";
    j["rank"] = b.rank_out;
    j["irregularity"] = rat_json(b.irr_out);
    j["slopes"] = slopes_json(b.slopes_out);
    if (b.class_label) j["class"] = rat_json(*b.class_label);
    return j;
}

inline json transformed_point_json(const TransformedPoint& p) {
    json j;
    j["label"] = p.label;
    if (p.exact) {
        j["mode"] = "exact";
        j["module"] = module_json(p.module);
        j["rank"] = rank(p.module);
        j["slopes"] = slopes_json(slope_multiset(p.module));
    } else {
        j = bookkeeping_json(p.book);
        j["label"] = p.label;
    }
    return j;
}

inline json transformed_type_json(const TransformedType& t) {
    json pts = json::array();
    for (const auto& p : t.points) pts.push_back(transformed_point_json(p));
    json j;
    j["mode"] = t.exact ? "exact" : "bookkeeping";
    j["rank"] = t.rank_out;
    j["points"] = pts;
    if (!t.note.empty()) j["note"] = t.note;
    return j;
}

}  // namespace dmod

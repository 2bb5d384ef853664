#pragma once

#include <string>

#include <json.hpp>

#include "moebius/dynamics.hpp"
#include "moebius/extended_plane.hpp"
#include "moebius/hyperbolic.hpp"
#include "moebius/mobius.hpp"
#include "moebius/regions.hpp"
#include "moebius/verify.hpp"

namespace moebius {

using nlohmann::json;

// Finite points serialize as [re, im]; infinity as the string "inf".
inline json to_json(const ExtendedComplex& p) {
    if (p.is_infinity()) return json("inf");
    return json::array({p.value().real(), p.value().imag()});
}

inline json to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

inline ExtendedComplex point_from_json(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return ExtendedComplex::infinity();
        throw Error("bad point literal: " + j.get<std::string>());
    }
    if (!j.is_array() || j.size() != 2) throw Error("point must be [re, im] or \"inf\"");
    return ExtendedComplex(j[0].get<double>(), j[1].get<double>());
}

inline Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw Error("complex must be [re, im]");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

// Map files carry raw coefficients; normalization happens on load.
inline json to_json(const MobiusMap& g) {
    return json{{"a", to_json(g.a)}, {"b", to_json(g.b)},
                {"c", to_json(g.c)}, {"d", to_json(g.d)}};
}

inline MobiusMap map_from_json(const json& j) {
    for (const char* key : {"a", "b", "c", "d"}) {
        if (!j.contains(key)) throw Error(std::string("map json missing \"") + key + "\"");
    }
    return normalize(complex_from_json(j["a"]), complex_from_json(j["b"]),
                     complex_from_json(j["c"]), complex_from_json(j["d"]));
}

inline json to_json(const HyperbolicProfile& p) {
    return json{{"alpha", to_json(p.alpha)},
                {"beta", to_json(p.beta)},
                {"k", p.k},
                {"tau", p.tau},
                {"pole", to_json(p.pole())}};
}

inline json to_json(const verify::SuiteReport& r) {
    return json{{"suite", verify::to_string(r.id)},
                {"trials", r.trials},
                {"failures", r.failures},
                {"worst_residual", r.worst_residual},
                {"witnesses", r.witnesses},
                {"seed", r.seed}};
}

// One orbit step as a JSON-lines record.
inline json orbit_line(const OrbitRecord& rec, std::size_t i) {
    json line{{"i", i}, {"a", to_json(rec.points[i])}};
    line["eta_abs"] = i == 0 ? 0.0 : rec.eta_abs[i - 1];
    if (i < rec.shadow.size()) {
        line["b"] = to_json(rec.shadow[i]);
        line["dev"] = rec.deviation[i];
        line["bound"] = rec.bound[i];
    }
    if (i < rec.region.size()) line["region"] = to_string(rec.region[i]);
    return line;
}

} // namespace moebius

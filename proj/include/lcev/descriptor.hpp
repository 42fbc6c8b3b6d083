// JSON solution descriptors.
//
//   { "twoBeta": 2, "r": "7/100", "q": "3/100", "alpha": "1/5",
//     "class": 1 | "beta0", "n": 2, "lambda": "-2/25",
//     "spatial": { "expCoeff": "0", "expExponent": 1,
//                  "terms": [ { "exponent": -1, "coeff": "-4" }, ... ],
//                  "power": "1/2" } }
//
// Terms are listed by ascending exponent. "power" (a non-integer exponent of
// S multiplying the body) is present only when nonzero. Key order is fixed,
// so dump(parse(dump(x))) reproduces dump(x) byte for byte.

#pragma once

#include "lcev/cev.hpp"
#include "lcev/errors.hpp"
#include "lcev/verify.hpp"

#include <json.hpp>

#include <limits>
#include <set>
#include <string>
#include <vector>

namespace lcev::descriptor {

using Json = nlohmann::ordered_json;

struct Descriptor {
    cev::CevParams params;
    cev::Provenance provenance;
    Rational lambda;
    ClosedFormFunction spatial;

    static Descriptor from(const cev::SpacetimeSolution& s) {
        return {s.params(), s.provenance(), s.lambda(), s.spatial()};
    }

    verify::Candidate candidate() const { return {params, lambda, spatial, provenance.str()}; }
};

inline Json params_json(const cev::CevParams& p) {
    Json j;
    j["twoBeta"] = p.two_beta();
    j["r"] = to_string(p.r());
    j["q"] = to_string(p.q());
    j["alpha"] = to_string(p.alpha());
    return j;
}

inline Json spatial_json(const ClosedFormFunction& f) {
    Json s;
    s["expCoeff"] = to_string(f.exp_coeff());
    s["expExponent"] = f.exp_exponent();
    Json terms = Json::array();
    for (const auto& [e, c] : f.body().terms()) terms.push_back(Json{{"exponent", e}, {"coeff", to_string(c)}});
    s["terms"] = std::move(terms);
    if (f.power() != 0) s["power"] = to_string(f.power());
    return s;
}

inline Json to_json(const Descriptor& d) {
    Json j = params_json(d.params);
    if (d.provenance.cls == cev::ClassId::BetaZero)
        j["class"] = "beta0";
    else
        j["class"] = static_cast<int>(d.provenance.cls);
    j["n"] = d.provenance.n;
    j["lambda"] = to_string(d.lambda);
    j["spatial"] = spatial_json(d.spatial);
    return j;
}

inline Json to_json(const cev::SpacetimeSolution& s) { return to_json(Descriptor::from(s)); }

inline std::string dump(const Descriptor& d, int indent = 2) { return to_json(d).dump(indent); }

namespace detail {

[[noreturn]] inline void fail(const std::string& what) { throw ParseError("descriptor: " + what); }

inline void expect_keys(const Json& j, const char* where, const std::set<std::string>& required,
                        const std::set<std::string>& optional = {}) {
    if (!j.is_object()) fail(std::string(where) + " must be an object");
    for (const auto& k : required)
        if (!j.contains(k)) fail(std::string(where) + " is missing \"" + k + "\"");
    for (const auto& [k, v] : j.items())
        if (!required.contains(k) && !optional.contains(k)) fail(std::string(where) + " has unknown key \"" + k + "\"");
}

inline Rational rational_field(const Json& j, const char* key) {
    const Json& v = j.at(key);
    if (!v.is_string()) fail(std::string("\"") + key + "\" must be a \"p/q\" string");
    return parse_rational(v.get<std::string>());
}

inline int int_field(const Json& j, const char* key) {
    const Json& v = j.at(key);
    if (!v.is_number_integer()) fail(std::string("\"") + key + "\" must be an integer");
    const auto x = v.get<long long>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
        fail(std::string("\"") + key + "\" is out of range");
    return static_cast<int>(x);
}

} // namespace detail

/// Strict parse: wrong types, missing or unknown keys, and malformed
/// rationals all raise ParseError.
inline Descriptor from_json(const Json& j) {
    using detail::fail;
    detail::expect_keys(j, "descriptor", {"twoBeta", "r", "q", "alpha", "class", "n", "lambda", "spatial"});
    const cev::CevParams params(detail::rational_field(j, "r"), detail::rational_field(j, "q"),
                                detail::rational_field(j, "alpha"), detail::int_field(j, "twoBeta"));
    cev::Provenance prov;
    const Json& cls = j.at("class");
    if (cls.is_string() && cls.get<std::string>() == "beta0") {
        prov.cls = cev::ClassId::BetaZero;
    } else if (cls.is_number_integer() && cls.get<long long>() >= 1 && cls.get<long long>() <= 4) {
        prov.cls = static_cast<cev::ClassId>(cls.get<int>());
    } else {
        fail("\"class\" must be 1..4 or \"beta0\"");
    }
    prov.n = detail::int_field(j, "n");
    const Rational lambda = detail::rational_field(j, "lambda");

    const Json& s = j.at("spatial");
    detail::expect_keys(s, "spatial", {"expCoeff", "expExponent", "terms"}, {"power"});
    const Rational w = detail::rational_field(s, "expCoeff");
    const int k = detail::int_field(s, "expExponent");
    if (w != 0 && k == 0) fail("\"expExponent\" must be nonzero when \"expCoeff\" is");
    const Json& terms = s.at("terms");
    if (!terms.is_array()) fail("\"terms\" must be an array");
    LaurentPoly body;
    std::set<int> seen;
    for (const auto& t : terms) {
        detail::expect_keys(t, "term", {"exponent", "coeff"});
        const int e = detail::int_field(t, "exponent");
        if (!seen.insert(e).second) fail("exponent " + std::to_string(e) + " appears twice");
        body.add_term(e, detail::rational_field(t, "coeff"));
    }
    const Rational power = s.contains("power") ? detail::rational_field(s, "power") : Rational(0);
    return {params, prov, lambda, ClosedFormFunction(w, k, std::move(body), power)};
}

inline Descriptor parse(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("descriptor: malformed JSON: ") + e.what());
    }
    return from_json(j);
}

/// Descriptors from a JSON document: one object, an array of objects, or a
/// report envelope whose "results" holds them.
inline std::vector<Descriptor> parse_many(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("descriptor: malformed JSON: ") + e.what());
    }
    std::vector<Descriptor> out;
    const Json* list = &j;
    if (j.is_object() && j.contains("results")) list = &j.at("results");
    if (list->is_array()) {
        for (const auto& d : *list) out.push_back(from_json(d));
    } else {
        out.push_back(from_json(*list));
    }
    return out;
}

} // namespace lcev::descriptor

#include "boxbound/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <set>

#include <fmt/format.h>

#include "boxbound/errors.hpp"

namespace boxbound {

using nlohmann::json;

namespace {

const json& field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key))
        throw InputError(fmt::format("{}: missing field '{}'", where, key));
    return obj.at(key);
}

std::vector<double> real_vector(const json& v, const std::string& where) {
    if (!v.is_array())
        throw InputError(fmt::format("{}: expected an array of numbers", where));
    std::vector<double> out;
    for (const json& x : v) {
        if (!x.is_number())
            throw InputError(fmt::format("{}: expected an array of numbers", where));
        out.push_back(x.get<double>());
    }
    return out;
}

double real(const json& v, const std::string& where) {
    if (!v.is_number())
        throw InputError(fmt::format("{}: expected a number", where));
    return v.get<double>();
}

Marginal parse_marginal(const json& m, const std::string& where) {
    const std::string type = field(m, "type", where).get<std::string>();
    if (type == "uniform")
        return UniformInterval{real(field(m, "a", where), where + ".a"),
                               real(field(m, "b", where), where + ".b")};
    if (type == "piecewise")
        return PiecewiseCdf{real_vector(field(m, "knots", where), where + ".knots"),
                            real_vector(field(m, "values", where), where + ".values")};
    throw InputError(fmt::format("{}: unknown marginal type '{}'", where, type));
}

ProductMeasure parse_measure(const json& m) {
    const std::string type = field(m, "type", "measure").get<std::string>();
    if (type == "uniform")
        return ProductMeasure::uniform(real_vector(field(m, "lower", "measure"), "measure.lower"),
                                       real_vector(field(m, "upper", "measure"), "measure.upper"));
    if (type == "independent") {
        const json& list = field(m, "marginals", "measure");
        if (!list.is_array())
            throw InputError("measure.marginals: expected an array");
        std::vector<Marginal> ms;
        for (std::size_t k = 0; k < list.size(); ++k)
            ms.push_back(parse_marginal(list[k], fmt::format("measure.marginals[{}]", k)));
        return ProductMeasure(std::move(ms));
    }
    throw InputError(fmt::format("measure: unknown type '{}'", type));
}

json marginal_to_json(const Marginal& m) {
    if (const auto* u = std::get_if<UniformInterval>(&m))
        return {{"type", "uniform"}, {"a", u->a}, {"b", u->b}};
    const auto& p = std::get<PiecewiseCdf>(m);
    return {{"type", "piecewise"}, {"knots", p.knots}, {"values", p.values}};
}

}  // namespace

EmptinessMode parse_mode(const std::string& text) {
    if (text == "closed")
        return EmptinessMode::Closed;
    if (text == "positive-measure")
        return EmptinessMode::PositiveMeasure;
    throw InputError(fmt::format("unknown emptiness mode '{}'", text));
}

namespace {

void check_version(const json& doc) {
    if (doc.is_object() && doc.contains("format_version") && doc["format_version"] != kFormatVersion)
        throw InputError(fmt::format("unsupported format_version {}", doc["format_version"].dump()));
}

}  // namespace

ProblemFile parse_problem(const json& doc) {
    try {
        check_version(doc);
        ProblemFile out;
        const json& dim = field(doc, "dimension", "problem");
        if (!dim.is_number_unsigned() || dim.get<std::size_t>() == 0)
            throw InputError("problem.dimension: expected a positive integer");
        out.dimension = dim.get<std::size_t>();
        out.measure = parse_measure(field(doc, "measure", "problem"));
        if (out.measure.dim() != out.dimension)
            throw InputError(fmt::format("measure is {}-d but dimension is {}", out.measure.dim(),
                                         out.dimension));
        const json& boxes = field(doc, "boxes", "problem");
        if (!boxes.is_array())
            throw InputError("problem.boxes: expected an array");
        std::set<std::string> ids;
        for (std::size_t i = 0; i < boxes.size(); ++i) {
            const std::string where = fmt::format("boxes[{}]", i);
            Box b{field(boxes[i], "id", where).get<std::string>(),
                  real_vector(field(boxes[i], "lower", where), where + ".lower"),
                  real_vector(field(boxes[i], "upper", where), where + ".upper")};
            validate(b);
            if (b.dim() != out.dimension)
                throw InputError(fmt::format("box '{}' is {}-d but dimension is {}", b.id, b.dim(),
                                             out.dimension));
            if (!ids.insert(b.id).second)
                throw InputError(fmt::format("duplicate box id '{}'", b.id));
            out.boxes.push_back(std::move(b));
        }
        if (doc.contains("mode"))
            out.mode = parse_mode(doc.at("mode").get<std::string>());
        return out;
    } catch (const json::exception& e) {
        throw InputError(fmt::format("malformed problem document: {}", e.what()));
    }
}

json to_json(const ProblemFile& problem) {
    json marginals = json::array();
    for (const Marginal& m : problem.measure.marginals())
        marginals.push_back(marginal_to_json(m));
    json boxes = json::array();
    for (const Box& b : problem.boxes)
        boxes.push_back({{"id", b.id}, {"lower", b.lower}, {"upper", b.upper}});
    json doc{{"dimension", problem.dimension},
             {"measure", {{"type", "independent"}, {"marginals", marginals}}},
             {"boxes", boxes}};
    if (problem.mode)
        doc["mode"] = to_string(*problem.mode);
    return doc;
}

json read_json(const std::string& path) {
    try {
        if (path == "-")
            return json::parse(std::cin);
        std::ifstream in(path);
        if (!in)
            throw InputError(fmt::format("cannot open '{}'", path));
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(fmt::format("'{}' is not valid JSON: {}", path, e.what()));
    }
}

bool is_moment_document(const json& doc) {
    return doc.is_object() && doc.contains("S") && !doc.contains("boxes");
}

MomentVector parse_moments(const json& doc) {
    try {
        check_version(doc);
        MomentVector mv;
        const json& n = field(doc, "n_events", "moments");
        if (!n.is_number_unsigned())
            throw InputError("moments.n_events: expected a nonnegative integer");
        mv.n_events = n.get<std::size_t>();
        const std::vector<double> s = real_vector(field(doc, "S", "moments"), "moments.S");
        if (doc.contains("m") && doc.at("m").get<std::size_t>() != s.size())
            throw InputError(fmt::format("moments.m = {} but {} values given",
                                         doc.at("m").get<std::size_t>(), s.size()));
        mv.s.assign(1, 1.0);
        mv.s.insert(mv.s.end(), s.begin(), s.end());
        for (double v : s)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw InputError("moments.S: binomial moments must be finite and nonnegative");
        if (doc.contains("Q") && !doc.at("Q").is_null())
            mv.q = real(doc.at("Q"), "moments.Q");
        return mv;
    } catch (const json::exception& e) {
        throw InputError(fmt::format("malformed moment document: {}", e.what()));
    }
}

json to_json(const MomentVector& moments) {
    json doc{{"format_version", kFormatVersion},
             {"kind", "moments"},
             {"n_events", moments.n_events},
             {"m", moments.order()},
             {"S", std::vector<double>(moments.s.begin() + 1, moments.s.end())}};
    if (moments.q)
        doc["Q"] = *moments.q;
    return doc;
}

}  // namespace boxbound

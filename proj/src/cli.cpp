#include "boxbound/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include "boxbound/bounding.hpp"
#include "boxbound/errors.hpp"
#include "boxbound/oracle.hpp"
#include "boxbound/problem_io.hpp"
#include "boxbound/screening.hpp"

namespace boxbound::cli {

using nlohmann::json;

namespace {

struct Options {
    std::string format;
    std::string mode;
    std::string input;

    std::size_t max_order = 0;

    std::string target = "union";
    std::size_t r = 1;
    std::optional<std::size_t> m;
    bool with_q = false;
    bool no_p0 = false;
    std::string method = "moment";

    std::string engine = "cells";
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 20240601;
    std::size_t chunks = kDefaultChunks;
};

std::string num(double v) { return fmt::format("{:.12g}", v); }

std::string vertex(const std::vector<double>& v) {
    std::vector<std::string> parts;
    for (double x : v)
        parts.push_back(num(x));
    return fmt::format("({})", fmt::join(parts, ", "));
}

std::string box_text(const Box& b) {
    return fmt::format("[{}, {}]", vertex(b.lower), vertex(b.upper));
}

std::string order_name(std::size_t k) {
    if (k == 2)
        return "pairs";
    if (k == 3)
        return "triples";
    return fmt::format("{}-tuples", k);
}

json envelope(const char* kind) { return {{"format_version", kFormatVersion}, {"kind", kind}}; }

class Session {
public:
    Session(const Options& opts, std::ostream& out) : opts_(opts), out_(out) {}

    bool json_output() const { return opts_.format == "json"; }

    const ProblemFile& problem() {
        if (!problem_) {
            const json doc = read_json(opts_.input);
            if (is_moment_document(doc))
                throw InputError("this subcommand needs a geometry document, got a moment vector");
            problem_ = parse_problem(doc);
        }
        return *problem_;
    }

    EmptinessMode mode() {
        return opts_.mode.empty() ? problem().effective_mode() : parse_mode(opts_.mode);
    }

    TupleLedger ledger(std::size_t max_order) {
        const ProblemFile& p = problem();
        const IntersectionGraph g = build_graph(p.boxes, mode());
        return enumerate_tuples(p.boxes, g, mode(), max_order, p.measure);
    }

    void screen() {
        const ProblemFile& p = problem();
        const std::size_t n = p.boxes.size();
        const std::size_t k_max = opts_.max_order == 0 ? n : opts_.max_order;
        const TupleLedger led = ledger(k_max);
        std::optional<UnionResult> summary;
        if (led.complete)
            summary = screened_union(led, n);

        json orders = json::array();
        if (!json_output())
            out_ << "mode: " << to_string(mode()) << "\n";
        // Pairs are listed exhaustively, failing ones included.
        if (k_max >= 2 && n >= 2) {
            json rows = json::array();
            std::size_t kept = 0;
            std::string text;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    const Box meet = corner_meet(p.boxes[i], p.boxes[j]);
                    const bool yes = is_nonempty(meet, mode());
                    kept += yes;
                    rows.push_back({{"members", {p.boxes[i].id, p.boxes[j].id}},
                                    {"lower", meet.lower},
                                    {"upper", meet.upper},
                                    {"nonempty", yes}});
                    text += fmt::format("  {} = {}  {}\n", meet.id, box_text(meet), yes ? "yes" : "no good");
                }
            }
            orders.push_back({{"order", 2}, {"rows", rows}});
            if (!json_output())
                out_ << fmt::format("{} ({} of {} nonempty)\n{}", order_name(2), kept, rows.size(), text);
        }
        for (std::size_t k = 3; k <= led.max_order(); ++k) {
            json rows = json::array();
            std::string text;
            for (const TupleEntry& e : led.order(k)) {
                json members = json::array();
                for (std::size_t v : e.members)
                    members.push_back(p.boxes[v].id);
                rows.push_back({{"members", members},
                                {"lower", e.box.lower},
                                {"upper", e.box.upper},
                                {"nonempty", true}});
                text += fmt::format("  {} = {}  yes\n", e.box.id, box_text(e.box));
            }
            orders.push_back({{"order", k}, {"rows", rows}});
            if (!json_output())
                out_ << fmt::format("{} ({})\n{}", order_name(k), rows.size(), text);
        }

        if (json_output()) {
            json doc = envelope("screen");
            doc["mode"] = to_string(mode());
            doc["n_events"] = n;
            doc["orders"] = orders;
            doc["terms_used"] = led.total_terms();
            doc["terms_full"] = full_term_count(n);
            doc["complete"] = led.complete;
            out_ << doc.dump(2) << "\n";
        } else if (summary) {
            out_ << fmt::format("{} of {} terms retained\n", summary->terms_used, summary->terms_full);
        } else {
            out_ << fmt::format("{} terms retained up to order {} (of {})\n", led.total_terms(),
                                k_max, full_term_count(n));
        }
    }

    void union_probability() {
        const ProblemFile& p = problem();
        const UnionResult res = screened_union(ledger(p.boxes.size()), p.boxes.size());
        if (json_output()) {
            json doc = envelope("union");
            doc["mode"] = to_string(mode());
            doc["Q"] = res.q;
            doc["terms_used"] = res.terms_used;
            doc["terms_full"] = res.terms_full;
            out_ << doc.dump(2) << "\n";
        } else {
            out_ << fmt::format("Q = {}\n{} of {} terms\n", num(res.q), res.terms_used, res.terms_full);
        }
    }

    void moments() {
        const ProblemFile& p = problem();
        const std::size_t m = opts_.m.value_or(std::min<std::size_t>(3, p.boxes.size()));
        const MomentVector mv = binomial_moments(ledger(p.boxes.size()), p.boxes.size(), m);
        if (json_output()) {
            out_ << to_json(mv).dump(2) << "\n";
            return;
        }
        out_ << fmt::format("N = {}\n", mv.n_events);
        for (std::size_t k = 1; k <= mv.order(); ++k)
            out_ << fmt::format("S_{} = {}\n", k, num(mv.S(k)));
        if (mv.q)
            out_ << fmt::format("Q = {}\n", num(*mv.q));
    }

    void bounds() {
        const json doc = read_json(opts_.input);
        const Target target = parse_target(opts_.target);
        std::optional<TupleLedger> led;
        MomentVector mv;
        if (is_moment_document(doc)) {
            mv = parse_moments(doc);
        } else {
            problem_ = parse_problem(doc);
            led = ledger(problem_->boxes.size());
            mv = binomial_moments(*led, problem_->boxes.size(), problem_->boxes.size());
        }
        const std::size_t n = mv.n_events;
        const std::size_t m = opts_.m.value_or(led ? std::min<std::size_t>(2, n) : mv.order());

        BoundPair bp;
        if (opts_.method == "moment") {
            if (opts_.with_q) {
                if (!mv.q)
                    throw InputError("--with-q needs Q; the moment document has none");
                bp = target == Target::Exactly ? q_exactly_bounds(*mv.q, mv, opts_.r, m)
                                               : q_atleast_bounds(*mv.q, mv, target_r(target), m);
            } else if (target == Target::Union) {
                bp = union_bounds(mv, m, !opts_.no_p0);
            } else if (target == Target::AtLeast) {
                bp = atleast_r_bounds(mv, m, opts_.r);
            } else {
                bp = exactly_r_bounds(mv, m, opts_.r);
            }
        } else if (opts_.method == "boolean" || opts_.method == "hunter-worsley") {
            if (!led)
                throw InputError(fmt::format("--method {} needs a geometry document", opts_.method));
            if (opts_.with_q)
                throw InputError("--with-q applies to --method moment only");
            if (opts_.method == "boolean") {
                bp = boolean_lp_bounds(make_boolean_system(*led, n, m), target, target_r(target));
            } else {
                if (target != Target::Union)
                    throw InputError("--method hunter-worsley bounds the union only");
                const std::vector<PairWeight> pw = pairwise_weights(*led);
                double largest = 0.0;
                for (const TupleEntry& e : led->order(1))
                    largest = std::max(largest, e.probability);
                bp = {largest, std::min(1.0, hunter_worsley_upper(mv.S(1), pw, n)), "hunter-worsley"};
            }
        } else {
            throw InputError(fmt::format("unknown method '{}'", opts_.method));
        }

        if (json_output()) {
            json out = envelope("bounds");
            out["target"] = to_string(target);
            if (target != Target::Union)
                out["r"] = opts_.r;
            out["m"] = m;
            out["n_events"] = n;
            out["method"] = bp.method;
            out["lower"] = bp.lower;
            out["upper"] = bp.upper;
            out_ << out.dump(2) << "\n";
        } else {
            const std::string what = target == Target::Union ? "P(xi >= 1)"
                                     : target == Target::AtLeast ? fmt::format("P(xi >= {})", opts_.r)
                                                                 : fmt::format("P(xi = {})", opts_.r);
            out_ << fmt::format("{} [{}, m = {}]\nlower = {}\nupper = {}\n", what, bp.method, m,
                                num(bp.lower), num(bp.upper));
        }
    }

    void oracle() {
        const ProblemFile& p = problem();
        json doc = envelope("oracle");
        doc["engine"] = opts_.engine;
        std::string text;
        if (opts_.engine == "ie") {
            const double q = full_inclusion_exclusion_union(p.boxes, p.measure);
            doc["Q"] = q;
            text = fmt::format("Q = {}\n", num(q));
        } else if (opts_.engine == "cells") {
            const CountDistribution dist = exact_count_distribution(p.boxes, p.measure);
            doc["p"] = dist.p;
            doc["Q"] = dist.union_probability();
            for (std::size_t i = 0; i < dist.p.size(); ++i)
                text += fmt::format("P(xi = {}) = {}\n", i, num(dist.p[i]));
            text += fmt::format("Q = {}\n", num(dist.union_probability()));
        } else if (opts_.engine == "mc") {
            const MonteCarloEstimate est =
                monte_carlo_union(p.boxes, p.measure, opts_.samples, opts_.seed, opts_.chunks);
            doc["estimate"] = est.estimate;
            doc["standard_error"] = est.standard_error;
            doc["samples"] = est.samples;
            doc["seed"] = opts_.seed;
            doc["chunks"] = opts_.chunks;
            text = fmt::format("Q ~ {} +/- {} ({} samples, seed {})\n", num(est.estimate),
                               num(est.standard_error), est.samples, opts_.seed);
        } else {
            throw InputError(fmt::format("unknown engine '{}'", opts_.engine));
        }
        if (json_output())
            out_ << doc.dump(2) << "\n";
        else
            out_ << text;
    }

    void graph() {
        const ProblemFile& p = problem();
        const IntersectionGraph g = build_graph(p.boxes, mode());
        if (!json_output()) {
            out_ << to_dot(g, p.boxes);
            return;
        }
        json doc = envelope("graph");
        json nodes = json::array();
        for (const Box& b : p.boxes)
            nodes.push_back(b.id);
        json edges = json::array();
        for (auto [i, j] : g.edges())
            edges.push_back({p.boxes[i].id, p.boxes[j].id});
        doc["nodes"] = nodes;
        doc["edges"] = edges;
        doc["clique_counts"] = clique_counts(g);
        doc["clique_number"] = clique_number(g);
        out_ << doc.dump(2) << "\n";
    }

private:
    static Target parse_target(const std::string& t) {
        if (t == "union")
            return Target::Union;
        if (t == "atleast")
            return Target::AtLeast;
        if (t == "exactly")
            return Target::Exactly;
        throw InputError(fmt::format("unknown target '{}'", t));
    }

    std::size_t target_r(Target t) const { return t == Target::Union ? 1 : opts_.r; }

    const Options& opts_;
    std::ostream& out_;
    std::optional<ProblemFile> problem_;
};

std::string default_format() {
    const char* env = std::getenv(kFormatEnv);
    if (env && (std::string(env) == "json" || std::string(env) == "table"))
        return env;
    return "table";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options opts;
    opts.format = default_format();

    CLI::App app{"Exact probabilities and LP bounds for unions and counts of box events"};
    app.name("boxbound");
    app.require_subcommand(1);
    app.add_option("--format", opts.format, "Output format (default from $BOXBOUND_FORMAT)")
        ->check(CLI::IsMember({"json", "table"}));
    app.add_option("--mode", opts.mode, "Emptiness test, overrides the input file")
        ->check(CLI::IsMember({"closed", "positive-measure"}));

    auto input = [&](CLI::App* sub) {
        sub->add_option("input", opts.input, "Input JSON document ('-' for stdin)")->required();
    };
    CLI::App* screen = app.add_subcommand("screen", "Pair and tuple screening tables");
    input(screen);
    screen->add_option("--max-order", opts.max_order, "Highest tuple order to list (0 = all)");
    CLI::App* uni = app.add_subcommand("union", "Exact union probability by screened inclusion-exclusion");
    input(uni);
    CLI::App* moments = app.add_subcommand("moments", "Binomial moments S_1..S_m and Q");
    input(moments);
    moments->add_option("--m", opts.m, "Highest moment order (default min(3, N))");
    CLI::App* bounds = app.add_subcommand("bounds", "LP bounds from geometry or a moment document");
    input(bounds);
    bounds->add_option("--target", opts.target, "Event to bound (default union)")->check(CLI::IsMember({"union", "atleast", "exactly"}));
    bounds->add_option("--r", opts.r, "Event count r for atleast/exactly");
    bounds->add_option("--m", opts.m, "Moment / intersection order");
    bounds->add_flag("--with-q", opts.with_q, "Add the exact union probability as a constraint");
    bounds->add_flag("--no-p0", opts.no_p0, "Union bounds over p_1..p_N without the S_0 row");
    bounds->add_option("--method", opts.method, "Formulation (default moment)")
        ->check(CLI::IsMember({"moment", "boolean", "hunter-worsley"}));
    CLI::App* orc = app.add_subcommand("oracle", "Ground truth by an independent engine");
    input(orc);
    orc->add_option("--engine", opts.engine, "Cell decomposition, full inclusion-exclusion or Monte Carlo (default cells)")->check(CLI::IsMember({"ie", "cells", "mc"}));
    orc->add_option("--samples", opts.samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
    orc->add_option("--seed", opts.seed, "Monte Carlo seed");
    orc->add_option("--chunks", opts.chunks, "Independent Monte Carlo streams")->check(CLI::PositiveNumber);
    CLI::App* graph = app.add_subcommand("graph", "Intersection graph (DOT, or JSON with --format json)");
    input(graph);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        Session session(opts, out);
        if (app.got_subcommand(screen))
            session.screen();
        else if (app.got_subcommand(uni))
            session.union_probability();
        else if (app.got_subcommand(moments))
            session.moments();
        else if (app.got_subcommand(bounds))
            session.bounds();
        else if (app.got_subcommand(orc))
            session.oracle();
        else
            session.graph();
        return kOk;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalError;
    }
}

}  // namespace boxbound::cli

#include "deltamod/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "deltamod/billiards.hpp"
#include "deltamod/cones.hpp"
#include "deltamod/hommaps.hpp"
#include "deltamod/jsonout.hpp"
#include "deltamod/reflection.hpp"
#include "deltamod/spectrum.hpp"

namespace deltamod {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

namespace {

using Array = JsonValue::Array;
using Object = JsonValue::Object;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

JsonValue vec_json(const Eigen::VectorXd& v) {
    Array a;
    a.reserve(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) a.emplace_back(v[i]);
    return a;
}

JsonValue frac_json(const Fraction& f) {
    return Object{{"den", JsonValue(f.denominator())}, {"num", JsonValue(f.numerator())}};
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

long parse_long(const std::string& s) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not an integer: '" + s + "'");
    }
    if (used != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
    return v;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (const std::string& item : split(s, ','))
        out.push_back(static_cast<int>(parse_long(item)));
    return out;
}

// --------------------------------------------------------------- group info

std::string run_group_info(const std::string& family, int param) {
    const ReflectionGroup g = build_group(parse_family(family), param);
    Object o;
    o["family"] = family_name(g.family());
    o["parameter"] = JsonValue(g.parameter());
    o["rank"] = JsonValue(g.rank());
    o["order"] = JsonValue(static_cast<long long>(g.order()));
    Array normals;
    for (const Eigen::VectorXd& n : g.simple_normals()) normals.push_back(vec_json(n));
    o["simple_normals"] = std::move(normals);
    std::map<int, long> hist;
    for (const GroupElement& e : g.elements()) ++hist[element_order(g, e)];
    Array hj;
    for (const auto& [ord, count] : hist)
        hj.push_back(Object{{"count", JsonValue(count)}, {"order", JsonValue(ord)}});
    o["element_orders_histogram"] = std::move(hj);
    return JsonValue(std::move(o)).dump() + "\n";
}

// ----------------------------------------------------------------- billiard

std::string run_trace(const std::string& family, int param, std::uint64_t seed, int samples) {
    const ReflectionGroup g = build_group(parse_family(family), param);
    GaussianSampler gauss(seed);
    const GreatCircle circle = random_circle(g.rank(), gauss);
    const BilliardPath path = fold_circle(g, circle);
    const BilliardCertificate cert = minimal_period(g, circle);

    Object o;
    o["circle"] = Object{{"p", vec_json(circle.p)}, {"v", vec_json(circle.v)}};
    o["lambda"] = JsonValue(cert.lambda);
    o["j"] = JsonValue(cert.j);
    o["k"] = JsonValue(cert.k);
    Array word;
    for (int letter : cert.monodromy.word) word.emplace_back(letter);
    o["monodromy_word"] = std::move(word);
    Array events;
    for (const PathEvent& e : path.events())
        events.push_back(Object{{"t", JsonValue(e.t)}, {"wall", JsonValue(e.wall)}});
    o["events"] = std::move(events);
    Array rows;
    for (int i = 0; i < samples; ++i) {
        const double t = kTwoPi * i / (samples - 1);
        const Eigen::VectorXd x = path.at(t);
        Array row{JsonValue(t)};
        for (Eigen::Index c = 0; c < x.size(); ++c) row.emplace_back(x[c]);
        rows.push_back(std::move(row));
    }
    o["samples"] = std::move(rows);
    return JsonValue(std::move(o)).dump() + "\n";
}

struct SurveyRow {
    std::uint64_t seed = 0;
    double lambda = 0.0;
    long j = 0;
    long k = 0;
    bool ok = false;
};

SurveyRow survey_one(const ReflectionGroup& g, std::uint64_t seed) {
    GaussianSampler gauss(seed);
    const GreatCircle circle = random_circle(g.rank(), gauss);
    try {
        const BilliardCertificate cert = minimal_period(g, circle);
        // Windings of the certified loop must land in the admissible
        // spectrum; orders_from_certificate throws on any violation.
        (void)orders_from_certificate(cert, 4);
        const bool ok =
            std::abs(static_cast<double>(cert.k) * cert.lambda -
                     kTwoPi * static_cast<double>(cert.j)) < 1e-9 &&
            g.order() % static_cast<std::size_t>(cert.k) == 0;
        return {seed, cert.lambda, cert.j, cert.k, ok};
    } catch (const CertificationFailure&) {
        return {seed, 0.0, 0, 0, false};
    }
}

std::string run_survey(const std::string& family, int param, long count,
                       std::uint64_t base_seed, int jobs, bool as_json) {
    const ReflectionGroup g = build_group(parse_family(family), param);
    std::vector<SurveyRow> rows(static_cast<std::size_t>(count));
    const auto seed_for = [base_seed](long i) {
        return splitmix64(base_seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(i));
    };
    if (jobs <= 1) {
        for (long i = 0; i < count; ++i)
            rows[static_cast<std::size_t>(i)] = survey_one(g, seed_for(i));
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> failures(static_cast<std::size_t>(jobs));
        for (int tid = 0; tid < jobs; ++tid) {
            pool.emplace_back([&, tid] {
                try {
                    for (long i = tid; i < count; i += jobs)
                        rows[static_cast<std::size_t>(i)] = survey_one(g, seed_for(i));
                } catch (...) {
                    failures[static_cast<std::size_t>(tid)] = std::current_exception();
                }
            });
        }
        for (std::thread& t : pool) t.join();
        for (const std::exception_ptr& e : failures)
            if (e) std::rethrow_exception(e);
    }

    if (as_json) {
        Array arr;
        for (const SurveyRow& r : rows)
            arr.push_back(Object{{"j", JsonValue(r.j)},
                                 {"k", JsonValue(r.k)},
                                 {"lambda", JsonValue(r.lambda)},
                                 {"ok", JsonValue(r.ok)},
                                 {"seed", JsonValue(r.seed)}});
        return JsonValue(std::move(arr)).dump() + "\n";
    }
    std::string out = "seed,lambda,j,k,ok\n";
    for (const SurveyRow& r : rows) {
        out += std::to_string(r.seed);
        out += ',';
        out += format_double(r.lambda);
        out += ',';
        out += std::to_string(r.j);
        out += ',';
        out += std::to_string(r.k);
        out += ',';
        out += r.ok ? '1' : '0';
        out += '\n';
    }
    return out;
}

// ------------------------------------------------------------------- hommap

MetricGraph parse_link(const std::string& desc) {
    const std::vector<std::string> segs = split(desc, ':');
    if (segs.empty()) throw std::invalid_argument("empty link description");
    if (segs[0] == "heawood") {
        if (segs.size() > 2) throw std::invalid_argument("heawood takes one optional length");
        const double len = segs.size() == 2 ? parse_length_expr(segs[1]) : std::numbers::pi / 3.0;
        return MetricGraph::heawood(len);
    }
    if (segs[0] == "cycle" || segs[0] == "star") {
        if (segs.size() != 3)
            throw std::invalid_argument(segs[0] + " needs a size and an edge length");
        const int n = static_cast<int>(parse_long(segs[1]));
        const double len = parse_length_expr(segs[2]);
        return segs[0] == "cycle" ? MetricGraph::cycle(n, len) : MetricGraph::star(n, len);
    }
    if (segs[0] == "file") {
        std::string path;
        for (std::size_t i = 1; i < segs.size(); ++i) {
            if (i > 1) path += ':';
            path += segs[i];
        }
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot read link file: " + path);
        std::ostringstream text;
        text << in.rdbuf();
        return MetricGraph::from_json(text.str());
    }
    throw std::invalid_argument("unknown link constructor: " + desc);
}

// Shape strings are colon-separated key=value pairs after a kind tag;
// segments without '=' continue the previous value (so link=cycle:7:pi/3
// survives the split).
std::map<std::string, std::string> parse_shape_kv(const std::vector<std::string>& segs) {
    std::map<std::string, std::string> kv;
    std::string last;
    for (std::size_t i = 1; i < segs.size(); ++i) {
        const std::size_t eq = segs[i].find('=');
        if (eq == std::string::npos) {
            if (last.empty())
                throw std::invalid_argument("shape segment '" + segs[i] + "' has no key");
            kv[last] += ':' + segs[i];
        } else {
            last = segs[i].substr(0, eq);
            if (kv.count(last)) throw std::invalid_argument("duplicate shape key: " + last);
            kv[last] = segs[i].substr(eq + 1);
        }
    }
    return kv;
}

HomogeneousMap build_shape(const std::string& shape, const std::string& link_flag) {
    const std::vector<std::string> segs = split(shape, ':');
    if (segs.empty()) throw std::invalid_argument("empty shape");
    std::map<std::string, std::string> kv = parse_shape_kv(segs);
    const double L = kv.count("L") ? parse_length_expr(kv["L"]) : 1.0;

    if (segs[0] == "tree") {
        if (!kv.count("m") || !kv.count("legs"))
            throw std::invalid_argument("tree shapes need m=<arcs> and legs=<list>");
        const int m = static_cast<int>(parse_long(kv["m"]));
        const std::vector<int> legs = parse_int_list(kv["legs"]);
        const double theta0 = kv.count("theta0") ? parse_length_expr(kv["theta0"]) : 0.0;
        int pod_legs = 2;
        for (int leg : legs) pod_legs = std::max(pod_legs, leg);
        return build_tree_map(m, KPod(pod_legs), legs, L, theta0);
    }
    if (segs[0] == "loop") {
        const std::string desc = kv.count("link") ? kv["link"] : link_flag;
        if (desc.empty())
            throw std::invalid_argument("loop shapes need link=<graph> or --link");
        const MetricGraph g = parse_link(desc);
        const std::string cycle = kv.count("cycle") ? kv["cycle"] : "auto";
        std::vector<int> vertices;
        if (cycle == "auto") {
            vertices = g.shortest_cycle();
        } else if (cycle.find(',') != std::string::npos) {
            vertices = parse_int_list(cycle);
        } else {
            vertices = g.find_cycle(static_cast<int>(parse_long(cycle)));
        }
        const int mult = kv.count("mult") ? static_cast<int>(parse_long(kv["mult"])) : 1;
        return build_loop_map(ConeOverGraph(g), steps_from_vertex_cycle(g, vertices), mult, L);
    }
    throw std::invalid_argument("shape must start with tree: or loop:");
}

JsonValue dichotomy_json(const DichotomyResult& d) {
    return Object{
        {"dot", JsonValue(d.dot)},
        {"norm_gap", JsonValue(d.norm_gap)},
        {"verdict", JsonValue(d.verdict == DichotomyVerdict::HalfIntegerOrder
                                  ? "half_integer_order"
                                  : "constant_distance")}};
}

std::string run_hommap_build(const HomogeneousMap& map) {
    const std::vector<ArcRepresentation> reps = arc_representations(map);
    const DichotomyResult dich = classify_arcs(reps, map.alpha());

    Object o;
    o["kind"] = map.kind() == HomogeneousMap::Kind::Tree ? "tree" : "loop";
    o["alpha"] = JsonValue(map.alpha());
    o["amplitude"] = JsonValue(map.amplitude());
    o["arc_count"] = JsonValue(map.arc_count());
    Array bps;
    for (int i = 0; i <= map.arc_count(); ++i) bps.emplace_back(map.breakpoint(i));
    o["breakpoints"] = std::move(bps);
    Array arcs;
    for (const ArcRepresentation& rep : reps)
        arcs.push_back(Object{{"chart", JsonValue(rep.chart)},
                              {"theta_hi", JsonValue(rep.theta_hi)},
                              {"theta_lo", JsonValue(rep.theta_lo)},
                              {"v1", vec_json(rep.v1)},
                              {"v2", vec_json(rep.v2)}});
    o["arcs"] = std::move(arcs);
    o["dichotomy"] = dichotomy_json(dich);

    if (map.kind() == HomogeneousMap::Kind::Tree) {
        Array legs;
        for (int leg : map.legs()) legs.emplace_back(leg);
        o["legs"] = std::move(legs);
    } else {
        o["multiplicity"] = JsonValue(map.multiplicity());
        o["path_length"] = JsonValue(map.path_length());
        Array steps;
        for (const PathStep& st : map.path())
            steps.push_back(
                Object{{"edge", JsonValue(st.edge)}, {"forward", JsonValue(st.forward)}});
        o["path"] = std::move(steps);
        const MetricGraph& g = map.cone().link();
        o["link"] = Object{{"edge_count", JsonValue(g.edge_count())},
                           {"vertex_count", JsonValue(g.vertex_count())}};

        // Attach the chamber reduction whenever the link supports it.
        const double len0 = g.edge(0).length;
        const long p = std::lround(std::numbers::pi / len0);
        bool bipartite = true;
        try {
            (void)g.bipartite_classes();
        } catch (const NonBipartiteLabeling&) {
            bipartite = false;
        }
        if (g.all_edges_have_length(len0) && p >= 1 &&
            std::abs(std::numbers::pi / len0 - static_cast<double>(p)) < 1e-9 && bipartite) {
            const FoldedBilliard fb = to_billiard(map, len0);
            o["billiard"] = Object{{"chamber_len", JsonValue(fb.chamber_len)},
                                   {"fold_j", JsonValue(fb.fold_cert.first)},
                                   {"fold_k", JsonValue(fb.fold_cert.second)},
                                   {"fold_period", JsonValue(fb.fold_period)},
                                   {"loop_j", JsonValue(fb.loop_cert.first)},
                                   {"loop_k", JsonValue(fb.loop_cert.second)},
                                   {"loop_period", JsonValue(fb.loop_period)},
                                   {"p", JsonValue(fb.p)},
                                   {"periods_per_loop", JsonValue(fb.fold_periods_per_loop)}};
        }
    }
    return JsonValue(std::move(o)).dump() + "\n";
}

std::string run_hommap_order(const HomogeneousMap& map, const std::vector<double>& radii,
                             int panels, int length_samples) {
    Object o;
    o["alpha"] = JsonValue(map.alpha());
    o["dichotomy"] = dichotomy_json(dichotomy_classify(map));
    Array estimates;
    for (double r : radii) {
        const OrderEstimate est = order_estimate(map, r, panels);
        estimates.push_back(Object{{"E", JsonValue(est.energy)},
                                   {"I", JsonValue(est.i_value)},
                                   {"ord", JsonValue(est.ord)},
                                   {"r", JsonValue(est.r)}});
    }
    o["estimates"] = std::move(estimates);
    o["image_length"] = JsonValue(image_length(map, length_samples));
    return JsonValue(std::move(o)).dump() + "\n";
}

// ----------------------------------------------------------------- spectrum

std::string run_spectrum_list(long group_order, double max_order, bool rank_one) {
    Array arr;
    for (const Fraction& f : admissible_orders({group_order, max_order, rank_one}))
        arr.push_back(frac_json(f));
    return JsonValue(std::move(arr)).dump() + "\n";
}

std::string run_spectrum_gap(long group_order) {
    return JsonValue(Object{{"gap", frac_json(order_gap(group_order))}}).dump() + "\n";
}

std::string run_spectrum_partitions(const std::string& alpha_text) {
    const double alpha = parse_length_expr(alpha_text);
    const std::vector<PartitionSolution> sols = partition_solutions(alpha);
    Object o;
    o["alpha"] = JsonValue(alpha);
    o["count"] = JsonValue(static_cast<long long>(sols.size()));
    Array arr;
    for (const PartitionSolution& sol : sols) {
        Array parts;
        for (long n : sol.parts) parts.emplace_back(n);
        Array lens;
        for (double len : sol.arc_lengths()) lens.emplace_back(len);
        arr.push_back(Object{{"arc_lengths", std::move(lens)},
                             {"degenerate", JsonValue(sol.degenerate)},
                             {"parts", std::move(parts)}});
    }
    o["solutions"] = std::move(arr);
    return JsonValue(std::move(o)).dump() + "\n";
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();

    CLI::App app{"reflection groups, chamber billiards, homogeneous maps, order spectra"};
    app.name("deltamod");
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    std::uint64_t seed = 0;
    int jobs = 1;
    std::string output;
    app.add_option("--seed", seed, "base seed for all sampling (default 0)");
    app.add_option("--jobs", jobs, "worker threads for surveys")->check(CLI::Range(1, 256));
    app.add_option("--output", output, "json or csv (surveys only)")
        ->check(CLI::IsMember({"json", "csv"}));

    CLI::App* group = app.add_subcommand("group", "reflection group queries");
    group->require_subcommand(1)->fallthrough();
    CLI::App* ginfo = group->add_subcommand("info", "group facts as JSON");
    ginfo->fallthrough();
    std::string gfamily;
    int gparam = 3;
    ginfo->add_option("--family", gfamily, "dihedral|a|b|d|h3")->required();
    ginfo->add_option("--param", gparam, "family parameter")->required();

    CLI::App* billiard = app.add_subcommand("billiard", "chamber billiards");
    billiard->require_subcommand(1)->fallthrough();
    CLI::App* trace = billiard->add_subcommand("trace", "fold one seeded random circle");
    trace->fallthrough();
    std::string tfamily;
    int tparam = 3;
    int samples = 33;
    trace->add_option("--family", tfamily, "dihedral|a|b|d|h3")->required();
    trace->add_option("--param", tparam, "family parameter")->required();
    trace->add_option("--samples", samples, "sample count on [0, 2*pi]")
        ->check(CLI::Range(2, 100000));
    CLI::App* survey = billiard->add_subcommand("survey", "certify many seeded circles");
    survey->fallthrough();
    std::string sfamily;
    int sparam = 3;
    long count = 100;
    survey->add_option("--family", sfamily, "dihedral|a|b|d|h3")->required();
    survey->add_option("--param", sparam, "family parameter")->required();
    survey->add_option("--count", count, "number of circles")->check(CLI::Range(1, 10000000));

    CLI::App* hommap = app.add_subcommand("hommap", "homogeneous maps into cones");
    hommap->require_subcommand(1)->fallthrough();
    CLI::App* hbuild = hommap->add_subcommand("build", "construct, chart, and classify");
    hbuild->fallthrough();
    std::string bshape, blink;
    hbuild->add_option("--shape", bshape,
                       "tree:m=..:legs=.. (1-based leg ids) or loop:link=..:cycle=..")
        ->required();
    hbuild->add_option("--link", blink, "heawood[:len] | cycle:n:len | star:k:len | file:path");
    CLI::App* horder = hommap->add_subcommand("order", "order functional by quadrature");
    horder->fallthrough();
    std::string oshape, olink;
    std::string rlist = "0.25,0.5,0.75,1";
    int panels = 8;
    int length_samples = 64;
    horder->add_option("--shape", oshape, "map shape (as in build)")->required();
    horder->add_option("--link", olink, "link graph for loop shapes");
    horder->add_option("--r", rlist, "comma-separated radii in (0, 1]");
    horder->add_option("--panels", panels, "quadrature panels per arc")
        ->check(CLI::Range(4, 4096));
    horder->add_option("--length-samples", length_samples, "initial chords for image length")
        ->check(CLI::Range(64, 1 << 20));

    CLI::App* spectrum = app.add_subcommand("spectrum", "admissible order spectrum");
    spectrum->require_subcommand(1)->fallthrough();
    CLI::App* slist = spectrum->add_subcommand("list", "enumerate admissible orders");
    slist->fallthrough();
    long sorder = 2;
    std::string smax = "2";
    bool rankone = false;
    slist->add_option("--group-order", sorder, "|W|, even, >= 2");
    slist->add_option("--max", smax, "largest order to list");
    slist->add_flag("--rank-one", rankone, "half-integer spectrum for tree targets");
    CLI::App* sgap = spectrum->add_subcommand("gap", "gap above order 1");
    sgap->fallthrough();
    long gorder = 2;
    sgap->add_option("--group-order", gorder, "|W|, even, >= 2")->required();
    CLI::App* sparts = spectrum->add_subcommand("partitions", "arc partitions of the circle");
    sparts->fallthrough();
    std::string alpha_text;
    sparts->add_option("--alpha", alpha_text, "order, e.g. 3/2 or 1.5")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (!output.empty() && output == "csv" && !survey->parsed())
            throw std::invalid_argument("csv output is only available for billiard survey");

        std::string payload;
        if (ginfo->parsed()) {
            payload = run_group_info(gfamily, gparam);
        } else if (trace->parsed()) {
            payload = run_trace(tfamily, tparam, seed, samples);
        } else if (survey->parsed()) {
            payload = run_survey(sfamily, sparam, count, seed, jobs, output == "json");
        } else if (hbuild->parsed()) {
            payload = run_hommap_build(build_shape(bshape, blink));
        } else if (horder->parsed()) {
            std::vector<double> radii;
            for (const std::string& item : split(rlist, ','))
                radii.push_back(parse_length_expr(item));
            payload = run_hommap_order(build_shape(oshape, olink), radii, panels,
                                       length_samples);
        } else if (slist->parsed()) {
            payload = run_spectrum_list(sorder, parse_length_expr(smax), rankone);
        } else if (sgap->parsed()) {
            payload = run_spectrum_gap(gorder);
        } else if (sparts->parsed()) {
            payload = run_spectrum_partitions(alpha_text);
        }

        out << payload;
        out.flush();

        const double ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
        std::string cmd = "deltamod";
        for (const std::string& a : args) {
            cmd += ' ';
            cmd += a;
        }
        Object manifest;
        manifest["command"] = std::move(cmd);
        manifest["digest"] = fnv1a64_hex(payload);
        manifest["duration_ms"] = JsonValue(ms);
        manifest["seed"] = JsonValue(seed);
        manifest["version"] = std::string(kToolVersion);
        err << JsonValue(std::move(manifest)).dump() << "\n";
        return 0;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace deltamod

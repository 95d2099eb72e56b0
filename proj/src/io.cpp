#include "tropic/io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tropic/moduli.hpp"

namespace tropic {

namespace {

Rat rat_from_json(const Json& j, const std::string& where) {
    if (j.is_number_integer())
        return Rat(Int(std::to_string(j.get<long long>())));
    if (j.is_string()) {
        auto q = parse_rational(j.get<std::string>());
        if (!q)
            throw ParseError("bad rational '" + j.get<std::string>() +
                             "' in " + where);
        return *q;
    }
    throw ParseError("expected integer or rational string in " + where);
}

Int int_from_json(const Json& j, const std::string& where) {
    if (j.is_number_integer())
        return Int(std::to_string(j.get<long long>()));
    if (j.is_string()) {
        auto q = parse_rational(j.get<std::string>());
        if (q && q->get_den() == 1) return q->get_num();
    }
    throw ParseError("expected integer in " + where);
}

RatVec rat_vec_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + " must be an array");
    RatVec out;
    for (const Json& e : j) out.push_back(rat_from_json(e, where));
    return out;
}

IntVec int_vec_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + " must be an array");
    IntVec out;
    for (const Json& e : j) out.push_back(int_from_json(e, where));
    return out;
}

Json json_of(const Rat& q) { return Json(to_string(q)); }
Json json_of(const Int& z) { return Json(z.get_str()); }

Json json_of(const IntVec& v) {
    Json a = Json::array();
    for (const Int& e : v) a.push_back(e.get_str());
    return a;
}

Json json_of(const RatVec& v) {
    Json a = Json::array();
    for (const Rat& e : v) a.push_back(to_string(e));
    return a;
}

Json json_of(const ExtRat& v) {
    return Json(to_string(v));
}

}  // namespace

RawCurve parse_curve_document(const Json& doc) {
    RawCurve raw;
    if (!doc.is_object()) throw ParseError("curve document must be an object");
    if (!doc.contains("ambient_rank") ||
        !doc["ambient_rank"].is_number_integer())
        throw ParseError("missing integral ambient_rank");
    raw.ambient_rank = doc["ambient_rank"].get<size_t>();

    if (!doc.contains("vertices") || !doc["vertices"].is_array())
        throw ParseError("missing vertices array");
    for (const Json& v : doc["vertices"]) {
        if (!v.contains("id") || !v["id"].is_string())
            throw ParseError("vertex without id");
        std::string id = v["id"].get<std::string>();
        raw.vertices.emplace_back(
            id, rat_vec_from_json(v.at("position"), "vertex " + id));
    }

    if (!doc.contains("edges") || !doc["edges"].is_array())
        throw ParseError("missing edges array");
    for (const Json& e : doc["edges"]) {
        RawEdge re;
        if (!e.contains("id") || !e["id"].is_string())
            throw ParseError("edge without id");
        re.id = e["id"].get<std::string>();
        re.weight = e.contains("weight")
                        ? int_from_json(e["weight"], "edge " + re.id)
                        : Int(1);
        if (e.contains("ends")) {
            if (!e["ends"].is_array() || e["ends"].size() != 2)
                throw ParseError("edge " + re.id + " needs two ends");
            re.bounded = true;
            re.v1 = e["ends"][0].get<std::string>();
            re.v2 = e["ends"][1].get<std::string>();
        } else if (e.contains("end")) {
            re.bounded = false;
            re.v1 = e["end"].get<std::string>();
            re.direction =
                int_vec_from_json(e.at("direction"), "edge " + re.id);
        } else {
            throw ParseError("edge " + re.id + " needs ends or end");
        }
        raw.edges.push_back(std::move(re));
    }
    if (doc.contains("markings"))
        for (const Json& m : doc["markings"])
            raw.markings.push_back(m.get<std::string>());
    return raw;
}

namespace {

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    Json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return doc;
}

}  // namespace

RawCurve load_curve_document(const std::string& path) {
    return parse_curve_document(read_json_file(path));
}

TropicalCurve load_curve(const std::string& path) {
    return validate_curve(load_curve_document(path));
}

ConstraintSet parse_constraint_document(const Json& doc,
                                        size_t ambient_rank) {
    ConstraintSet cs;
    if (!doc.contains("constraints") || !doc["constraints"].is_array())
        throw ParseError("missing constraints array");
    for (const Json& c : doc["constraints"]) {
        AffineConstraint a;
        a.base = rat_vec_from_json(c.at("point"), "constraint point");
        if (a.base.size() != ambient_rank)
            throw ParseError("constraint point has wrong length");
        if (c.contains("span"))
            for (const Json& s : c["span"]) {
                IntVec v = int_vec_from_json(s, "constraint span");
                if (v.size() != ambient_rank)
                    throw ParseError("constraint span vector length");
                a.span.push_back(std::move(v));
            }
        a.codimension = c.contains("codimension")
                            ? c["codimension"].get<long>()
                            : static_cast<long>(ambient_rank) -
                                  static_cast<long>(a.span.size()) - 1;
        cs.constraints.push_back(std::move(a));
    }
    return cs;
}

ConstraintSet load_constraints(const std::string& path, size_t ambient_rank) {
    return parse_constraint_document(read_json_file(path), ambient_rank);
}

PreLogDocument parse_prelog_document(const Json& doc) {
    PreLogDocument out;
    if (!doc.contains("configs") || !doc["configs"].is_array())
        throw ParseError("missing configs array");
    for (const Json& c : doc["configs"]) {
        PreLogPathConfig config;
        config.label = c.value("vertex", std::string("path"));
        config.direction =
            int_vec_from_json(c.at("direction"), "config direction");
        if (c.contains("segment")) config.segment = c["segment"].get<size_t>();
        for (const Json& nd : c.at("nodes")) {
            PathNode node;
            if (nd.contains("a") || nd.contains("b")) {
                node.type = NodeType::EXAMPLE1;
                node.a = rat_from_json(nd.at("a"), "node a");
                node.b = rat_from_json(nd.at("b"), "node b");
            } else {
                node.type = NodeType::TRIVALENT;
                node.k = rat_from_json(nd.at("k"), "node k");
                node.l = rat_from_json(nd.at("l"), "node l");
                node.m = rat_from_json(nd.at("m"), "node m");
            }
            config.nodes.push_back(std::move(node));
        }
        for (const Json& ed : c.at("edges")) {
            PathEdgeData e;
            e.integral_length = rat_from_json(ed.at("length"), "edge length");
            e.weight = ed.contains("weight")
                           ? int_from_json(ed["weight"], "edge weight")
                           : Int(1);
            config.edges.push_back(std::move(e));
        }
        out.configs[config.label] = std::move(config);
    }
    if (doc.contains("tau"))
        for (const Json& t : doc["tau"]) out.taus.push_back(t.get<double>());
    return out;
}

PreLogDocument load_prelog(const std::string& path) {
    return parse_prelog_document(read_json_file(path));
}

Json curve_to_json(const TropicalCurve& curve) {
    Json doc;
    doc["schema_version"] = "1";
    doc["ambient_rank"] = curve.ambient_rank;
    Json vertices = Json::array();
    for (const auto& v : curve.vertex_ids) {
        Json jv;
        jv["id"] = v;
        jv["position"] = json_of(curve.pos(v));
        vertices.push_back(std::move(jv));
    }
    doc["vertices"] = std::move(vertices);
    Json edges = Json::array();
    for (const Edge& e : curve.edges) {
        Json je;
        je["id"] = e.id;
        je["weight"] = e.weight.get_str();
        if (e.bounded) {
            je["ends"] = Json::array({e.tail, e.head});
        } else {
            je["end"] = e.tail;
            je["direction"] = json_of(e.primitive_dir);
        }
        edges.push_back(std::move(je));
    }
    doc["edges"] = std::move(edges);
    doc["markings"] = curve.markings;
    return doc;
}

namespace {

Json profile_json(const AssumptionProfile& p) {
    Json j;
    j["trivalent_domain"] = p.trivalent_domain;
    j["assumption_a"] = p.a_ok;
    j["assumption_c"] = p.c_ok;
    Json witnesses = Json::array();
    for (const AssumptionWitness& w : p.witnesses) {
        Json jw;
        jw["clause"] = std::string(1, w.clause);
        jw["detail"] = w.detail;
        witnesses.push_back(std::move(jw));
    }
    j["witnesses"] = std::move(witnesses);
    Json classes = Json::object();
    for (const auto& [v, cls] : p.vertex_classes)
        classes[v] = to_string(cls);
    j["vertex_classes"] = std::move(classes);
    return j;
}

Json wellspaced_json(const WellSpacedResult& ws) {
    Json j;
    j["well_spaced"] = ws.well_spaced;
    Json witnesses = Json::array();
    for (const WellSpacedWitness& w : ws.witnesses) {
        Json jw;
        jw["context"] = w.context;
        Json cands = Json::array();
        for (const WellSpacedCandidate& c : w.candidates) {
            Json jc;
            jc["vertex"] = c.vertex;
            jc["distance"] = json_of(c.distance);
            cands.push_back(std::move(jc));
        }
        jw["candidates"] = std::move(cands);
        jw["minimum"] = json_of(w.minimum);
        jw["minimum_count"] = w.minimum_count;
        jw["branch"] = to_string(w.branch);
        if (!w.exception_class.empty())
            jw["exception_class"] = w.exception_class;
        jw["vacuous"] = w.vacuous;
        witnesses.push_back(std::move(jw));
    }
    j["witnesses"] = std::move(witnesses);
    return j;
}

Json verdict_json(const SmoothabilityVerdict& v) {
    Json j;
    j["verdict"] = to_string(v.verdict);
    j["theorem"] = to_string(v.tag);
    if (!v.reason.empty()) j["reason"] = v.reason;
    if (v.wellspaced) j["wellspaced"] = wellspaced_json(*v.wellspaced);
    return j;
}

}  // namespace

Json validate_report(const CurveAnalysis& analysis) {
    const TropicalCurve& c = analysis.curve;
    Json j;
    j["schema_version"] = "1";
    j["valid"] = true;
    j["ambient_rank"] = c.ambient_rank;
    j["vertices"] = c.vertex_ids.size();
    j["edges"] = c.edges.size();
    j["unbounded_edges"] = c.unbounded_count();
    j["genus"] = c.genus();
    j["profile"] = profile_json(analysis.profile);
    return j;
}

Json obstruction_report(const CurveAnalysis& analysis) {
    Json j;
    j["schema_version"] = "1";
    ObstructionBasis H = dual_obstruction_basis(analysis);
    j["dimension"] = H.dimension;
    Json segs = Json::array();
    for (const Segment& s : H.segments.segments) {
        Json js;
        js["bouquet"] = s.bouquet;
        Json edges = Json::array();
        for (size_t ei : s.edges)
            edges.push_back(analysis.curve.edges[ei].id);
        js["edges"] = std::move(edges);
        js["vertices"] = s.vertices;
        js["closed"] = s.closed;
        Json perp = Json::array();
        for (const IntVec& p : s.perp) perp.push_back(json_of(p));
        js["span_perp"] = std::move(perp);
        segs.push_back(std::move(js));
    }
    j["segments"] = std::move(segs);
    Json basis = Json::array();
    for (const ObstructionVector& v : H.basis) {
        Json jv;
        Json covs = Json::array();
        for (const IntVec& u : v.covectors) covs.push_back(json_of(u));
        jv["covectors"] = std::move(covs);
        if (v.global) jv["global"] = json_of(*v.global);
        basis.push_back(std::move(jv));
    }
    j["basis"] = std::move(basis);
    return j;
}

Json wellspaced_report(const CurveAnalysis& analysis, unsigned seed) {
    Json j;
    j["schema_version"] = "1";
    SmoothabilityVerdict v = smoothability_verdict(analysis, seed);
    j["verdict"] = verdict_json(v);
    return j;
}

Json analyze_report(const CurveAnalysis& analysis, unsigned seed) {
    const TropicalCurve& c = analysis.curve;
    Json j = validate_report(analysis);
    Json degree = Json::array();
    for (const auto& [vec, count] : degree_map(c)) {
        Json jd;
        jd["vector"] = json_of(vec);
        jd["count"] = count.get_str();
        degree.push_back(std::move(jd));
    }
    j["degree"] = std::move(degree);

    Json bouquets = Json::array();
    for (const Bouquet& b : analysis.bouquets.bouquets) {
        Json jb;
        Json edges = Json::array();
        for (size_t ei : b.edges) edges.push_back(c.edges[ei].id);
        jb["edges"] = std::move(edges);
        jb["betti"] = b.betti;
        bouquets.push_back(std::move(jb));
    }
    j["bouquets"] = std::move(bouquets);

    SuperabundanceReport sup = superabundance_report(analysis);
    Json dims;
    dims["expected"] = sup.expected_dim;
    dims["actual"] = sup.actual_dim;
    if (sup.obstruction_dim) dims["obstruction"] = *sup.obstruction_dim;
    dims["superabundant"] = sup.superabundant;
    dims["identity_checked"] = sup.identity_checked;
    dims["identity_ok"] = sup.identity_ok;
    j["dimensions"] = std::move(dims);

    if (analysis.image) {
        WeightsSummary w = weights_summary(c, *analysis.image);
        Json jw;
        jw["total_inner_weight"] = w.total_inner_weight.get_str();
        jw["total_marked_weight"] = w.total_marked_weight.get_str();
        j["weights"] = std::move(jw);
        j["verdict"] = verdict_json(smoothability_verdict(analysis, seed));
    }
    return j;
}

Json kuranishi_report(const PreLogDocument& doc, const CurveAnalysis* analysis,
                      unsigned seed) {
    Json j;
    j["schema_version"] = "1";
    Json contribs = Json::array();
    std::vector<LeadingContribution> all;
    for (const auto& [label, config] : doc.configs) {
        LeadingContribution c = leading_contribution(config);
        Json jc;
        jc["vertex"] = label;
        jc["order"] = c.order.get_str();
        jc["coefficient"] = to_string(c.coefficient);
        jc["direction"] = json_of(c.direction);
        if (!doc.taus.empty()) {
            Json lengths = Json::array();
            for (double tau : doc.taus) {
                Json jl;
                std::ostringstream tau_text;
                tau_text << tau;
                jl["tau"] = tau_text.str();
                Json per_edge = Json::array();
                for (double len :
                     tropicalization_lengths(config.nodes, tau)) {
                    char buf[64];
                    std::snprintf(buf, sizeof(buf), "%.17g", len);
                    per_edge.push_back(std::string(buf));
                }
                jl["edge_lengths"] = std::move(per_edge);
                lengths.push_back(std::move(jl));
            }
            jc["tropicalization"] = std::move(lengths);
        }
        contribs.push_back(std::move(jc));
        all.push_back(std::move(c));
    }
    j["contributions"] = std::move(contribs);

    if (analysis) {
        LeadingFormSystem sys =
            leading_form_system(*analysis, doc.configs, seed);
        Json js;
        js["rank"] = sys.rank;
        js["codimension"] = sys.codimension;
        Json basis = Json::array();
        for (const IntVec& a : sys.adapted_basis) basis.push_back(json_of(a));
        js["adapted_basis"] = std::move(basis);
        Json forms = Json::array();
        for (const LinearForm& f : sys.forms) {
            Json jf = Json::object();
            for (const auto& [slot, coeff] : f.coeffs)
                jf[slot] = to_string(coeff);
            forms.push_back(std::move(jf));
        }
        js["forms"] = std::move(forms);
        j["leading_forms"] = std::move(js);

        ObstructionBasis H = dual_obstruction_basis(*analysis);
        PairingReport pairing = pair_with_H(all, H);
        Json jp;
        jp["leading_vanishes"] = pairing.leading_vanishes;
        Json orders = Json::array();
        for (const auto& o : pairing.by_order) {
            Json jo;
            jo["order"] = o.order.get_str();
            Json sums = Json::array();
            for (const Rat& s : o.sums) sums.push_back(to_string(s));
            jo["sums"] = std::move(sums);
            orders.push_back(std::move(jo));
        }
        jp["by_order"] = std::move(orders);
        j["pairing"] = std::move(jp);
    }
    return j;
}

Json multiplicity_report(const CurveAnalysis& analysis, const ConstraintSet& cs,
                         unsigned seed) {
    Json j;
    j["schema_version"] = "1";
    MultiplicityReport rep = lattice_multiplicity(analysis, cs, seed);
    j["lattice_index"] = rep.lattice_index_D.get_str();
    Json deltas = Json::array();
    for (const Int& d : rep.deltas) deltas.push_back(d.get_str());
    j["deltas"] = std::move(deltas);
    j["index_with_deltas"] = rep.D_tilde.get_str();
    j["marked_weight"] = rep.marked_weight.get_str();
    j["total"] = rep.total.get_str();
    j["obstruction_rank"] = rep.obstruction_rank;
    Json pairs = Json::array();
    for (const auto& [a, b] : rep.tied_pairs)
        pairs.push_back(Json::array({a, b}));
    j["tied_pairs"] = std::move(pairs);
    return j;
}

Json count_report(const CountReport& rep) {
    Json j;
    j["schema_version"] = "1";
    j["total"] = rep.total.get_str();
    Json entries = Json::array();
    for (const CountEntry& e : rep.entries) {
        Json je;
        je["curve"] = e.label;
        je["matched"] = e.matched;
        je["verdict"] = to_string(e.verdict);
        je["contribution"] = e.contribution.get_str();
        if (!e.note.empty()) je["note"] = e.note;
        entries.push_back(std::move(je));
    }
    j["curves"] = std::move(entries);
    return j;
}

std::string emit_report(const Json& report) { return report.dump(2) + "\n"; }

namespace {

void write_output(const Json& report, const std::string& output,
                  std::ostream& out) {
    std::string text = emit_report(report);
    if (output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(output);
    if (!f) throw ParseError("cannot write " + output);
    f << text;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out,
                std::ostream& err) {
    CLI::App app{"Exact smoothability and multiplicity toolkit for tropical "
                 "curves"};
    app.require_subcommand(1);

    std::string curve_path, constraints_path, prelog_path, output;
    std::string format = "json";
    app.add_option("--output", output, "Write the report to a file");
    app.add_option("--format", format, "Report format (json)");

    auto add_curve = [&](CLI::App* cmd, bool required = true) {
        auto* opt = cmd->add_option("--curve", curve_path, "Curve document");
        if (required) opt->required();
    };

    CLI::App* validate = app.add_subcommand("validate", "Validate a curve");
    add_curve(validate);
    CLI::App* analyze = app.add_subcommand("analyze", "Full analysis report");
    add_curve(analyze);
    CLI::App* obstruction =
        app.add_subcommand("obstruction", "Dual obstruction space");
    add_curve(obstruction);
    CLI::App* wellspaced =
        app.add_subcommand("wellspaced", "Smoothability verdict");
    add_curve(wellspaced);
    CLI::App* kuranishi =
        app.add_subcommand("kuranishi", "Leading obstruction terms");
    add_curve(kuranishi, false);
    kuranishi->add_option("--prelog", prelog_path, "Coefficient document")
        ->required();
    CLI::App* multiplicity =
        app.add_subcommand("multiplicity", "Lattice-index multiplicity");
    add_curve(multiplicity);
    multiplicity
        ->add_option("--constraints", constraints_path, "Constraint document")
        ->required();
    CLI::App* count = app.add_subcommand("count", "Weighted tropical count");
    count->add_option("--curve", curve_path, "Manifest document")->required();
    count->add_option("--constraints", constraints_path,
                      "Constraint document")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    unsigned seed = default_seed();
    try {
        if (format != "json") {
            err << "unsupported format: " << format << "\n";
            return 2;
        }
        if (app.got_subcommand(validate)) {
            CurveAnalysis a = CurveAnalysis::of(load_curve(curve_path));
            write_output(validate_report(a), output, out);
        } else if (app.got_subcommand(analyze)) {
            CurveAnalysis a = CurveAnalysis::of(load_curve(curve_path));
            write_output(analyze_report(a, seed), output, out);
        } else if (app.got_subcommand(obstruction)) {
            CurveAnalysis a = CurveAnalysis::of(load_curve(curve_path));
            write_output(obstruction_report(a), output, out);
        } else if (app.got_subcommand(wellspaced)) {
            CurveAnalysis a = CurveAnalysis::of(load_curve(curve_path));
            write_output(wellspaced_report(a, seed), output, out);
        } else if (app.got_subcommand(kuranishi)) {
            PreLogDocument doc = load_prelog(prelog_path);
            std::optional<CurveAnalysis> a;
            if (!curve_path.empty())
                a = CurveAnalysis::of(load_curve(curve_path));
            write_output(kuranishi_report(doc, a ? &*a : nullptr, seed),
                         output, out);
        } else if (app.got_subcommand(multiplicity)) {
            CurveAnalysis a = CurveAnalysis::of(load_curve(curve_path));
            ConstraintSet cs =
                load_constraints(constraints_path, a.curve.ambient_rank);
            write_output(multiplicity_report(a, cs, seed), output, out);
        } else if (app.got_subcommand(count)) {
            Json manifest = read_json_file(curve_path);
            if (!manifest.contains("curves") ||
                !manifest["curves"].is_array())
                throw ParseError("manifest needs a curves array");
            std::vector<std::pair<std::string, CurveAnalysis>> candidates;
            std::optional<ConstraintSet> cs;
            for (const Json& entry : manifest["curves"]) {
                std::string path = entry.get<std::string>();
                CurveAnalysis a = CurveAnalysis::of(load_curve(path));
                if (!cs)
                    cs = load_constraints(constraints_path,
                                          a.curve.ambient_rank);
                candidates.emplace_back(path, std::move(a));
            }
            if (!cs) throw ParseError("manifest lists no curves");
            write_output(count_report(tropical_count(candidates, *cs, seed)),
                         output, out);
        }
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const CurveError& e) {
        err << "rejected: " << e.what() << "\n";
        return 1;
    } catch (const EnumerationError& e) {
        err << "rejected: " << e.what() << "\n";
        return 1;
    } catch (const KuranishiError& e) {
        err << "rejected: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace tropic

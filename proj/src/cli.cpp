#include "polyprod/cli.hpp"

#include <chrono>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "polyprod/exemplars.hpp"
#include "polyprod/structfile.hpp"

namespace polyprod::cli {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

CheckPolicy policy_from(const Options& opt) {
    CheckPolicy p;
    p.exhaustive_budget = opt.exhaustive_budget;
    p.assoc_samples = opt.samples * 10;
    p.law_samples = opt.samples;
    p.seed = opt.seed;
    return p;
}

struct CheckRecord {
    std::string law;
    CheckResult result;
    std::optional<double> time_ms;  ///< set when the check was timed on its own
};

template <typename F>
CheckRecord timed_check(std::string law, F&& run) {
    auto t0 = Clock::now();
    CheckRecord rec;
    rec.law = std::move(law);
    rec.result = run();
    rec.time_ms = ms_since(t0);
    return rec;
}

/// A deterministic fact (trait comparison), reported as a 1-case check.
CheckResult trait_result(bool matched, std::string note) {
    CheckResult r;
    r.passed = matched;
    r.evidence.exhaustive = true;
    r.evidence.count = 1;
    r.note = std::move(note);
    return r;
}

bool all_passed(const std::vector<CheckRecord>& recs) {
    for (const auto& rec : recs)
        if (!rec.result.passed) return false;
    return true;
}

// --- report fragments -------------------------------------------------------

Json evidence_json(const Evidence& e) {
    Json j;
    j["level"] = e.exhaustive ? "exhaustive" : "sampled";
    j["count"] = e.count;
    if (!e.exhaustive) j["seed"] = e.seed;
    return j;
}

Json check_json(const CheckRecord& rec) {
    Json j;
    j["law"] = rec.law;
    j["verdict"] = rec.result.passed ? "pass" : "fail";
    j["evidence"] = evidence_json(rec.result.evidence);
    if (rec.result.counterexample) {
        Json c;
        Json tuple = Json::array();
        for (const auto& e : rec.result.counterexample->tuple) tuple.push_back(e.str());
        c["tuple"] = std::move(tuple);
        c["detail"] = rec.result.counterexample->detail;
        j["counterexample"] = std::move(c);
    }
    if (!rec.result.note.empty()) j["note"] = rec.result.note;
    if (rec.time_ms) j["time_ms"] = *rec.time_ms;
    return j;
}

Json checks_json(const std::vector<CheckRecord>& recs) {
    Json arr = Json::array();
    for (const auto& rec : recs) arr.push_back(check_json(rec));
    return arr;
}

void checks_text(const std::vector<CheckRecord>& recs, std::ostream& os) {
    os << "checks:\n";
    for (const auto& rec : recs) {
        os << "  " << rec.law;
        for (std::size_t i = rec.law.size(); i < 26; ++i) os << ' ';
        os << (rec.result.passed ? "pass  " : "FAIL  ") << rec.result.evidence.str();
        if (rec.time_ms) os << "  [" << *rec.time_ms << " ms]";
        os << "\n";
        if (!rec.result.note.empty()) os << "      note: " << rec.result.note << "\n";
        if (rec.result.counterexample) {
            os << "      counterexample: (";
            const auto& tuple = rec.result.counterexample->tuple;
            for (std::size_t i = 0; i < tuple.size(); ++i)
                os << (i ? ", " : "") << tuple[i].str();
            os << ") -- " << rec.result.counterexample->detail << "\n";
        }
    }
}

Json classification_json(const ClassificationReport& rep, std::optional<double> time_ms) {
    Json j;
    j["kind"] = ring_kind_name(rep.kind);
    j["laws_pass"] = rep.laws_pass();
    j["zeroless"] = rep.zeroless;
    j["unital"] = rep.unital;
    j["derived"] = rep.derived;
    if (rep.quer_symmetric) {
        j["quer_symmetric"] = *rep.quer_symmetric;
        if (rep.quer_factor) j["quer_factor"] = rep.quer_factor->str();
    }
    if (!rep.notes.empty()) j["notes"] = rep.notes;
    if (time_ms) j["time_ms"] = *time_ms;
    return j;
}

std::string classification_text(const ClassificationReport& rep) {
    std::ostringstream os;
    os << ring_kind_name(rep.kind);
    os << "; " << (rep.zeroless ? "zeroless" : "has a zero");
    os << "; " << (rep.unital ? "unital" : "nonunital");
    os << "; " << (rep.derived ? "derived" : "nonderived");
    if (rep.quer_symmetric) {
        os << "; " << (*rep.quer_symmetric ? "quer-symmetric" : "quer-nonsymmetric");
        if (rep.quer_factor) os << " (factor " << rep.quer_factor->str() << ")";
    }
    return os.str();
}

Json identity_json(const IdentityReport& rep) {
    Json j;
    j["class"] = identity_class_name(rep.cls);
    if (rep.element) j["element"] = rep.element->str();
    Json placements = Json::array();
    for (int p : rep.placements) placements.push_back(p);
    j["placements"] = std::move(placements);
    if (!rep.note.empty()) j["note"] = rep.note;
    return j;
}

std::string identity_text(const IdentityReport& rep) {
    std::ostringstream os;
    os << identity_class_name(rep.cls);
    if (rep.element) os << "; element " << rep.element->str();
    if (!rep.placements.empty()) {
        os << "; placements";
        for (int p : rep.placements) os << " " << p;
    }
    return os.str();
}

// --- input resolution -------------------------------------------------------

struct LoadedInput {
    std::string label;
    std::optional<AlgebraicStructure> structure;
    std::optional<PolyadicRing> ring;
    std::optional<ExpectedTraits> expected;  ///< catalog entries only
    std::vector<std::string> laws;           ///< file-declared laws
};

bool is_catalog_name(const std::string& name) {
    for (const auto& n : catalog_names())
        if (n == name) return true;
    return false;
}

/// "z<modulus>-sum-<arity>" builds the derived modular-sum group.
std::optional<AlgebraicStructure> try_derived_name(const std::string& name) {
    if (name.rfind("z", 0) != 0) return std::nullopt;
    auto mark = name.find("-sum-");
    if (mark == std::string::npos) return std::nullopt;
    std::string mod_text = name.substr(1, mark - 1);
    std::string arity_text = name.substr(mark + 5);
    auto all_digits = [](const std::string& t) {
        if (t.empty()) return false;
        for (char c : t)
            if (c < '0' || c > '9') return false;
        return true;
    };
    if (!all_digits(mod_text) || !all_digits(arity_text)) return std::nullopt;
    return derived_group_zm(std::stoll(mod_text), std::stoi(arity_text));
}

LoadedInput load_input(const std::string& input) {
    if (is_catalog_name(input)) {
        auto item = catalog_get(input);
        LoadedInput li;
        li.label = item.name;
        li.expected = item.expected;
        if (item.structure)
            li.structure = std::move(item.structure);
        else if (item.ring)
            li.ring = std::move(item.ring);
        else
            throw ParseError("catalog entry '" + input +
                             "' is a quiver, not a structure or ring");
        return li;
    }
    if (auto derived = try_derived_name(input)) {
        LoadedInput li;
        li.label = derived->name;
        li.structure = std::move(derived);
        return li;
    }
    std::ifstream in(input);
    if (!in)
        throw ParseError("cannot open '" + input +
                         "': not a file, catalog name, or zM-sum-N");
    std::ostringstream buf;
    buf << in.rdbuf();
    StructureDoc doc = parse_structure_doc(buf.str());
    LoadedInput li;
    li.laws = doc.laws;
    if (is_ring_doc(doc)) {
        li.ring = build_ring(doc);
        li.label = li.ring->name;
    } else {
        li.structure = build_structure(doc);
        li.label = li.structure->name;
    }
    return li;
}

Json op_json(const PolyadicOperation& op) {
    Json j;
    j["role"] = op.role;
    j["arity"] = op.arity;
    j["program"] = op.program->serialize();
    return j;
}

Json structure_json(const AlgebraicStructure& s) {
    Json j;
    j["name"] = s.name;
    j["kind"] = "structure";
    j["carrier"] = s.carrier->spec_string();
    Json ops = Json::array();
    Json op = op_json(s.mult);
    if (s.quer) op["quer"] = s.quer->program->serialize();
    ops.push_back(std::move(op));
    j["operations"] = std::move(ops);
    return j;
}

Json ring_json(const PolyadicRing& r) {
    Json j;
    j["name"] = r.name;
    j["kind"] = "ring";
    j["carrier"] = r.carrier->spec_string();
    Json ops = Json::array();
    Json add = op_json(r.add);
    if (r.add_quer) add["quer"] = r.add_quer->program->serialize();
    ops.push_back(std::move(add));
    Json mul = op_json(r.mul);
    if (r.mul_quer) mul["quer"] = r.mul_quer->program->serialize();
    ops.push_back(std::move(mul));
    j["operations"] = std::move(ops);
    return j;
}

Json input_json(const LoadedInput& li) {
    return li.structure ? structure_json(*li.structure) : ring_json(*li.ring);
}

void input_text(const LoadedInput& li, std::ostream& os) {
    if (li.structure) {
        const auto& s = *li.structure;
        os << "carrier: " << s.carrier->spec_string() << "\n";
        os << "op " << s.mult.role << "/" << s.mult.arity << ": "
           << s.mult.program->serialize();
        if (s.quer) os << "  quer " << s.quer->program->serialize();
        os << "\n";
    } else {
        const auto& r = *li.ring;
        os << "carrier: " << r.carrier->spec_string() << "\n";
        os << "op add/" << r.add.arity << ": " << r.add.program->serialize();
        if (r.add_quer) os << "  quer " << r.add_quer->program->serialize();
        os << "\n";
        os << "op mul/" << r.mul.arity << ": " << r.mul.program->serialize();
        if (r.mul_quer) os << "  quer " << r.mul_quer->program->serialize();
        os << "\n";
    }
}

// --- law drivers -------------------------------------------------------------

/// Declared-quer consistency: querelement() must reproduce the declared map.
CheckRecord quer_declared_check(const AlgebraicStructure& s, const CheckPolicy& pol) {
    return timed_check("quer-declared", [&] {
        CheckResult res;
        res.evidence.seed = pol.seed;
        Rng rng(pol.seed);
        std::uint64_t trials = std::min<std::uint64_t>(pol.law_samples, 12);
        if (s.carrier->enumerable() &&
            s.carrier->elements().size() < static_cast<std::size_t>(trials))
            trials = s.carrier->elements().size();
        for (std::uint64_t i = 0; i < trials; ++i) {
            Element g = s.carrier->enumerable()
                            ? s.carrier->elements()[static_cast<std::size_t>(i)]
                            : s.carrier->sample(rng);
            ++res.evidence.count;
            Element declared = s.quer->program->eval({g});
            Element solved = querelement(s, g, pol);
            if (!(declared == solved)) {
                res.counterexample = Counterexample{
                    {g}, "declared quer gives " + declared.str() +
                             ", solving the quer equation gives " + solved.str()};
                return res;
            }
        }
        res.passed = true;
        return res;
    });
}

void run_structure_law(const AlgebraicStructure& s, const std::string& law,
                       const CheckPolicy& pol, std::vector<CheckRecord>& recs,
                       Json& extra, std::ostringstream& extra_text) {
    if (law == "assoc") {
        recs.push_back(timed_check("assoc", [&] { return check_total_associativity(s, pol); }));
    } else if (law == "comm" || law == "semicomm") {
        auto t0 = Clock::now();
        auto rep = check_commutativity(s, pol);
        CheckRecord rec;
        rec.law = law;
        rec.time_ms = ms_since(t0);
        if (law == "comm") {
            rec.result = rep.result;
        } else {
            rec.result.passed = rep.semicommutative;
            rec.result.evidence = rep.result.evidence;
            rec.result.note = "invariance under the first<->last argument swap";
            if (!rep.semicommutative) rec.result.counterexample = rep.result.counterexample;
        }
        recs.push_back(std::move(rec));
    } else if (law == "solv") {
        recs.push_back(timed_check("solv", [&] { return check_solvability(s, pol).result; }));
    } else if (law == "dornte") {
        recs.push_back(timed_check("dornte", [&] { return check_dornte(s, pol); }));
    } else if (law == "quer") {
        if (!s.quer) throw ParseError("law 'quer' needs a declared quer program");
        recs.push_back(quer_declared_check(s, pol));
    } else if (law == "identity") {
        auto t0 = Clock::now();
        auto rep = find_identity(s, pol);
        CheckRecord rec;
        rec.law = "identity";
        rec.time_ms = ms_since(t0);
        rec.result.passed = rep.cls != IdentityClass::None;
        rec.result.evidence = rep.evidence;
        rec.result.note = identity_text(rep);
        recs.push_back(std::move(rec));
        extra["identity"] = identity_json(rep);
        extra_text << "identity: " << identity_text(rep) << "\n";
    } else if (law == "zero") {
        auto t0 = Clock::now();
        auto rep = find_zero(s, pol);
        CheckRecord rec;
        rec.law = "zero";
        rec.time_ms = ms_since(t0);
        rec.result.passed = rep.zero.has_value();
        rec.result.evidence = rep.evidence;
        rec.result.note = rep.zero ? "zero " + rep.zero->str() : rep.note;
        recs.push_back(std::move(rec));
        Json jz;
        jz["found"] = rep.zero.has_value();
        if (rep.zero) jz["element"] = rep.zero->str();
        if (!rep.note.empty()) jz["note"] = rep.note;
        extra["zero"] = std::move(jz);
        extra_text << "zero: " << (rep.zero ? rep.zero->str() : "none") << "\n";
    } else {
        throw ParseError("unknown structure law '" + law + "'");
    }
}

/// Ring laws: 'classify' bundles the base laws plus the classification
/// block; 'distrib', 'dornte', 'quer-sym' run on their own.
void run_ring_law(const PolyadicRing& r, const std::string& law, const CheckPolicy& pol,
                  std::vector<CheckRecord>& recs, Json& extra,
                  std::ostringstream& extra_text,
                  std::optional<ClassificationReport>& classified) {
    if (law == "classify") {
        auto t0 = Clock::now();
        auto rep = classify(r, pol);
        double total = ms_since(t0);
        for (const auto& [name, res] : rep.evidence) recs.push_back({name, res, std::nullopt});
        extra["classification"] = classification_json(rep, total);
        extra_text << "classification: " << classification_text(rep) << "\n";
        if (!rep.notes.empty()) extra_text << "notes: " << rep.notes << "\n";
        classified = std::move(rep);
    } else if (law == "distrib") {
        recs.push_back(
            timed_check("distrib", [&] { return check_distributivity(r, pol).combined(); }));
    } else if (law == "dornte") {
        auto t0 = Clock::now();
        auto rep = check_double_dornte(r, pol);
        double total = ms_since(t0);
        recs.push_back({"add-dornte", rep.additive, total});
        if (rep.multiplicative) recs.push_back({"mul-dornte", *rep.multiplicative, std::nullopt});
    } else if (law == "quer-sym") {
        if (!classified) {
            classified = classify(r, pol);
        }
        CheckRecord rec;
        rec.law = "quer-sym";
        rec.result = trait_result(
            classified->quer_symmetric.value_or(false),
            classified->quer_factor
                ? "quer compositions differ by factor " + classified->quer_factor->str()
                : "");
        rec.result.evidence.exhaustive = false;
        rec.result.evidence.count = pol.law_samples;
        rec.result.evidence.seed = pol.seed;
        recs.push_back(std::move(rec));
    } else {
        throw ParseError("unknown ring law '" + law + "'");
    }
}

void expect_record(std::vector<CheckRecord>& recs, const std::string& law, bool matched,
                   const std::string& expected, const std::string& got) {
    recs.push_back(
        {law, trait_result(matched, "expected " + expected + ", got " + got), std::nullopt});
}

std::string bool_name(bool v) { return v ? "true" : "false"; }

/// Compare the classification of a catalog ring against its pinned traits.
void ring_trait_records(const ExpectedTraits& t, const ClassificationReport& rep,
                        std::vector<CheckRecord>& recs) {
    if (t.kind)
        expect_record(recs, "expect-kind", ring_kind_name(rep.kind) == *t.kind, "'" + *t.kind + "'",
                      "'" + ring_kind_name(rep.kind) + "'");
    if (t.zeroless)
        expect_record(recs, "expect-zeroless", rep.zeroless == *t.zeroless,
                      bool_name(*t.zeroless), bool_name(rep.zeroless));
    if (t.unital)
        expect_record(recs, "expect-unital", rep.unital == *t.unital, bool_name(*t.unital),
                      bool_name(rep.unital));
    if (t.derived)
        expect_record(recs, "expect-derived", rep.derived == *t.derived, bool_name(*t.derived),
                      bool_name(rep.derived));
    if (t.quer_symmetric)
        expect_record(recs, "expect-quer-symmetric",
                      rep.quer_symmetric.value_or(!*t.quer_symmetric) == *t.quer_symmetric,
                      bool_name(*t.quer_symmetric),
                      rep.quer_symmetric ? bool_name(*rep.quer_symmetric) : "unset");
    if (t.quer_factor)
        expect_record(recs, "expect-quer-factor",
                      rep.quer_factor && rep.quer_factor->str() == *t.quer_factor,
                      *t.quer_factor, rep.quer_factor ? rep.quer_factor->str() : "unset");
}

int emit(Json& report, std::ostringstream& text, const Options& opt, std::ostream& out,
         int code) {
    report["exit"] = code;
    if (opt.format == "text") {
        text << "exit " << code << "\n";
        out << text.str();
    } else {
        out << report.dump(2) << "\n";
    }
    return code;
}

Json options_json(const Options& opt) {
    Json j;
    j["seed"] = opt.seed;
    j["samples"] = opt.samples;
    j["exhaustive_budget"] = opt.exhaustive_budget;
    j["strict"] = opt.strict;
    return j;
}

int emit_error(Json& report, std::ostringstream& text, const Options& opt, std::ostream& out,
               const PolyprodError& err) {
    Json e;
    e["code"] = err.code();
    e["message"] = err.what();
    report["error"] = std::move(e);
    text << "error: " << err.what() << "\n";
    return emit(report, text, opt, out, 2);
}

}  // namespace

// --- verify ------------------------------------------------------------------

int cmd_verify(const std::string& input, const Options& opt, std::ostream& out) {
    Json report;
    report["command"] = "verify";
    report["options"] = options_json(opt);
    std::ostringstream text;
    const CheckPolicy pol = policy_from(opt);
    try {
        LoadedInput li = load_input(input);
        report["input"] = input_json(li);
        text << "verify " << li.label << "\n";
        input_text(li, text);

        std::vector<CheckRecord> recs;
        Json extra;
        std::ostringstream extra_text;
        std::optional<ClassificationReport> classified;

        std::vector<std::string> laws = li.laws;
        if (li.structure) {
            const auto& s = *li.structure;
            if (laws.empty()) {
                laws = {"assoc"};
                if (s.quer) laws.push_back("dornte");
                if (s.quer) laws.push_back("quer");
            }
            for (const auto& law : laws) run_structure_law(s, law, pol, recs, extra, extra_text);
            if (li.expected) {
                if (li.expected->commutative || li.expected->semicommutative) {
                    auto rep = check_commutativity(s, pol);
                    if (li.expected->commutative)
                        expect_record(recs, "expect-commutative",
                                      rep.commutative == *li.expected->commutative,
                                      bool_name(*li.expected->commutative),
                                      bool_name(rep.commutative));
                    if (li.expected->semicommutative)
                        expect_record(recs, "expect-semicommutative",
                                      rep.semicommutative == *li.expected->semicommutative,
                                      bool_name(*li.expected->semicommutative),
                                      bool_name(rep.semicommutative));
                }
            }
        } else {
            if (laws.empty()) laws = {"classify"};
            for (const auto& law : laws)
                run_ring_law(*li.ring, law, pol, recs, extra, extra_text, classified);
            if (li.expected) {
                if (!classified) classified = classify(*li.ring, pol);
                ring_trait_records(*li.expected, *classified, recs);
            }
        }

        report["checks"] = checks_json(recs);
        for (auto& [key, value] : extra.items()) report[key] = value;
        checks_text(recs, text);
        text << extra_text.str();
        return emit(report, text, opt, out, all_passed(recs) ? 0 : 1);
    } catch (const PolyprodError& err) {
        return emit_error(report, text, opt, out, err);
    }
}

// --- product -----------------------------------------------------------------

namespace {

int iterations_to(int target, int base) { return (target - 1) / (base - 1); }

Json solution_json(int target, int n1, int n2) {
    Json j;
    j["arity"] = target;
    j["ell_1"] = iterations_to(target, n1);
    j["ell_2"] = iterations_to(target, n2);
    return j;
}

}  // namespace

int cmd_product(const ProductArgs& args, const Options& opt, std::ostream& out) {
    Json report;
    report["command"] = "product";
    report["mode"] = args.mode;
    report["options"] = options_json(opt);
    std::ostringstream text;
    const CheckPolicy pol = policy_from(opt);
    try {
        if (args.mode != "full" && args.mode != "mixed" && args.mode != "field")
            throw ParseError("unknown product mode '" + args.mode +
                             "' (expected full, mixed, or field)");
        LoadedInput a = load_input(args.a);
        LoadedInput b = load_input(args.b);
        if (a.structure.has_value() != b.structure.has_value())
            throw ParseError("product inputs must both be structures or both rings");
        report["inputs"] = Json::array({input_json(a), input_json(b)});
        text << "product " << args.mode << ": " << a.label << " | " << b.label << "\n";

        std::vector<CheckRecord> recs;
        std::string document;

        if (a.structure) {
            const auto& s1 = *a.structure;
            const auto& s2 = *b.structure;
            AlgebraicStructure prod;
            Json meta;
            if (args.mode == "full") {
                prod = full_product({s1, s2});
            } else if (args.mode == "mixed") {
                int n1 = s1.mult.arity, n2 = s2.mult.arity;
                int fallback = std::lcm(n1 - 1, n2 - 1) + 1;
                int target = args.arity.value_or(fallback);
                auto solutions = arity_compatible(n1, n2, target);
                const AritySolution* chosen = nullptr;
                for (const auto& sol : solutions)
                    if (sol.n_prime == target) chosen = &sol;
                if (!chosen)
                    throw IncompatibleArities("no common iterated arity " +
                                              std::to_string(target) + " for arities " +
                                              std::to_string(n1) + " and " + std::to_string(n2));
                prod = mixed_product(s1, s2, *chosen);
                meta["solution"] = solution_json(chosen->n_prime, n1, n2);
            } else {
                throw ParseError("field mode needs two rings, got structures");
            }
            meta["name"] = prod.name;
            meta["carrier"] = prod.carrier->spec_string();
            meta["arity"] = prod.mult.arity;
            report["product"] = std::move(meta);
            text << "product structure: " << prod.name << " (arity " << prod.mult.arity
                 << ")\n";
            recs.push_back(
                timed_check("assoc", [&] { return check_total_associativity(prod, pol); }));
            if (!prod.identity_candidates.empty()) {
                auto rep = find_identity(prod, pol);
                report["identity"] = identity_json(rep);
                text << "identity: " << identity_text(rep) << "\n";
            }
            document = serialize_structure_doc(doc_of_structure(prod));
        } else {
            const auto& r1 = *a.ring;
            const auto& r2 = *b.ring;
            PolyadicRing prod;
            Json meta;
            if (args.mode == "full") {
                prod = ring_full_product(r1, r2);
            } else if (args.mode == "mixed") {
                int m_prime =
                    args.add_arity.value_or(std::lcm(r1.add_arity() - 1, r2.add_arity() - 1) + 1);
                int n_prime =
                    args.mul_arity.value_or(std::lcm(r1.mul_arity() - 1, r2.mul_arity() - 1) + 1);
                prod = ring_mixed_product(r1, r2, m_prime, n_prime);
                meta["add_solution"] = solution_json(m_prime, r1.add_arity(), r2.add_arity());
                meta["mul_solution"] = solution_json(n_prime, r1.mul_arity(), r2.mul_arity());
            } else {
                prod = field_product(r1, r2, pol);
            }
            meta["name"] = prod.name;
            meta["carrier"] = prod.carrier->spec_string();
            meta["add_arity"] = prod.add_arity();
            meta["mul_arity"] = prod.mul_arity();
            report["product"] = std::move(meta);
            text << "product ring: " << prod.name << " (shape (" << prod.add_arity() << ","
                 << prod.mul_arity() << "))\n";
            if (report["product"].contains("add_solution")) {
                const auto& as = report["product"]["add_solution"];
                const auto& ms = report["product"]["mul_solution"];
                text << "add iterations: " << as["ell_1"] << ", " << as["ell_2"] << "\n";
                text << "mul iterations: " << ms["ell_1"] << ", " << ms["ell_2"] << "\n";
            }
            auto t0 = Clock::now();
            auto rep = classify(prod, pol);
            double total = ms_since(t0);
            for (const auto& [name, res] : rep.evidence) recs.push_back({name, res, std::nullopt});
            report["classification"] = classification_json(rep, total);
            text << "classification: " << classification_text(rep) << "\n";
            document = serialize_structure_doc(doc_of_ring(prod));
        }

        report["checks"] = checks_json(recs);
        checks_text(recs, text);
        report["document"] = document;
        text << "document:\n" << document;
        if (args.emit_path) {
            std::ofstream file(*args.emit_path);
            if (!file) throw ParseError("cannot write '" + *args.emit_path + "'");
            file << document;
            report["emitted"] = *args.emit_path;
            text << "emitted: " << *args.emit_path << "\n";
        }
        return emit(report, text, opt, out, all_passed(recs) ? 0 : 1);
    } catch (const PolyprodError& err) {
        return emit_error(report, text, opt, out, err);
    }
}

// --- hetero ------------------------------------------------------------------

int cmd_hetero(const HeteroArgs& args, const Options& opt, std::ostream& out) {
    Json report;
    report["command"] = "hetero";
    report["options"] = options_json(opt);
    std::ostringstream text;
    const CheckPolicy pol = policy_from(opt);
    try {
        LoadedInput li = load_input(args.input);
        if (!li.structure)
            throw ParseError("hetero powers need a single-operation structure input");
        const auto& s = *li.structure;
        report["input"] = input_json(li);
        text << "hetero " << li.label << ": k=" << args.k << " ell_id=" << args.ell_id
             << " quiver=" << args.quiver << "\n";

        QuiverSpec quiver;
        if (args.quiver == "postlike") {
            quiver = make_quiver_postlike(s.mult.arity, args.k, args.ell_id);
        } else if (args.quiver == "named") {
            if (!args.quiver_name) throw ParseError("quiver=named needs a quiver name");
            auto item = catalog_get(*args.quiver_name);
            if (!item.quiver)
                throw ParseError("catalog entry '" + *args.quiver_name + "' is not a quiver");
            quiver = *item.quiver;
            if (quiver.n_in != s.mult.arity)
                throw ArityMismatch("quiver '" + *args.quiver_name + "' expects arity " +
                                    std::to_string(quiver.n_in) + ", structure has arity " +
                                    std::to_string(s.mult.arity));
        } else if (args.quiver == "search") {
            auto n_out = hetero_arity(s.mult.arity, args.k, args.ell_id);
            if (!n_out)
                throw NotQuantized("no integer output arity for n=" +
                                   std::to_string(s.mult.arity) + ", k=" +
                                   std::to_string(args.k) +
                                   ", ell_id=" + std::to_string(args.ell_id));
            auto found = quiver_search(s, *n_out, args.k, args.ell_id, args.budget, pol);
            Json search;
            search["budget"] = args.budget;
            search["associative"] = found.size();
            Json specs = Json::array();
            for (const auto& q : found) specs.push_back(q.str());
            search["quivers"] = std::move(specs);
            report["search"] = std::move(search);
            text << "search: " << found.size() << " associative quiver(s) within budget "
                 << args.budget << "\n";
            if (found.empty())
                throw NotAssociative("no associative quiver found within budget " +
                                     std::to_string(args.budget));
            quiver = found.front();
        } else {
            throw ParseError("unknown quiver mode '" + args.quiver +
                             "' (expected postlike, named, or search)");
        }

        auto t0 = Clock::now();
        HeteroResult hetero = hetero_power(s, quiver, pol, opt.strict);
        double assoc_ms = ms_since(t0);
        report["n_prime"] = quiver.n_out;
        Json jq;
        jq["text"] = quiver.str();
        Json rows = Json::array();
        for (const auto& row : quiver.rows) {
            Json jr = Json::array();
            for (const auto& slot : row) jr.push_back(Json::array({slot.first, slot.second}));
            rows.push_back(std::move(jr));
        }
        jq["rows"] = std::move(rows);
        Json intact = Json::array();
        for (const auto& slot : quiver.intact)
            intact.push_back(Json::array({slot.first, slot.second}));
        jq["intact"] = std::move(intact);
        report["quiver"] = std::move(jq);
        text << quiver.str() << "\n";
        text << "n' = " << quiver.n_out << "\n";

        std::vector<CheckRecord> recs;
        recs.push_back({"assoc", hetero.assoc, assoc_ms});

        auto id_rep = find_identity(hetero.structure, pol);
        report["identity"] = identity_json(id_rep);
        text << "identity: " << identity_text(id_rep) << "\n";

        Json findings = Json::array();
        std::ostringstream quer_text;
        std::size_t solved = 0, probed = 0;
        {
            std::vector<Element> elems;
            const auto& carrier = *hetero.structure.carrier;
            if (carrier.enumerable()) {
                for (const auto& e : carrier.elements()) {
                    elems.push_back(e);
                    if (elems.size() == 6) break;
                }
            } else {
                elems = carrier.sample_many(pol.seed, 3);
            }
            for (const auto& g : elems) {
                ++probed;
                std::string why;
                Json f;
                f["element"] = g.str();
                if (auto q = try_querelement(hetero.structure, g, pol, &why)) {
                    ++solved;
                    f["quer"] = q->str();
                } else {
                    f["unsolvable"] = why;
                    if (quer_text.str().empty())
                        quer_text << "; e.g. " << g.str() << ": " << why;
                }
                findings.push_back(std::move(f));
            }
        }
        Json jquer;
        jquer["solved"] = solved;
        jquer["probed"] = probed;
        jquer["findings"] = std::move(findings);
        report["quer"] = std::move(jquer);
        text << "quer: " << solved << " of " << probed << " solved" << quer_text.str() << "\n";

        report["checks"] = checks_json(recs);
        checks_text(recs, text);
        return emit(report, text, opt, out, all_passed(recs) ? 0 : 1);
    } catch (const PolyprodError& err) {
        return emit_error(report, text, opt, out, err);
    }
}

// --- table -------------------------------------------------------------------

int cmd_table(int k_max, int n_max, const Options& opt, std::ostream& out) {
    Json report;
    report["command"] = "table";
    report["k_max"] = k_max;
    report["n_max"] = n_max;
    std::ostringstream text;
    text << "hetero power quantization, k <= " << k_max << ", n <= " << n_max << "\n";
    try {
        auto quantized = quantization_table(k_max, n_max);
        Json rows = Json::array();
        auto emit_row = [&](int k, int ell_mu, int ell_id, bool marked,
                            const std::vector<std::pair<int, int>>& pairs) {
            Json j;
            j["k"] = k;
            j["ell_mu"] = ell_mu;
            j["ell_id"] = ell_id;
            j["marked"] = marked;
            Json jp = Json::array();
            for (const auto& [n, np] : pairs) jp.push_back(Json::array({n, np}));
            j["pairs"] = std::move(jp);
            rows.push_back(std::move(j));
            text << "k=" << k << " ell_mu=" << ell_mu << " ell_id=" << ell_id
                 << (marked ? " *" : "  ") << " |";
            for (const auto& [n, np] : pairs) text << " " << n << "->" << np;
            text << "\n";
        };
        for (int k = 2; k <= k_max; ++k) {
            // The arity-preserving diagonal: no intact slots, n' = n (marked).
            std::vector<std::pair<int, int>> diagonal;
            for (int n = 2; n <= n_max; ++n) diagonal.emplace_back(n, n);
            emit_row(k, k, 0, true, diagonal);
            for (const auto& row : quantized)
                if (row.k == k) emit_row(row.k, row.ell_mu, row.ell_id, false, row.pairs);
        }
        report["rows"] = std::move(rows);
        return emit(report, text, opt, out, 0);
    } catch (const PolyprodError& err) {
        return emit_error(report, text, opt, out, err);
    }
}

// --- catalog -----------------------------------------------------------------

int cmd_catalog(const Options& opt, std::ostream& out) {
    Json report;
    report["command"] = "catalog";
    std::ostringstream text;
    try {
        Json entries = Json::array();
        for (const auto& name : catalog_names()) {
            auto item = catalog_get(name);
            Json j;
            j["name"] = item.name;
            j["type"] = item.structure ? "structure" : (item.ring ? "ring" : "quiver");
            j["summary"] = item.summary;
            const auto& t = item.expected;
            Json expected;
            if (t.kind) expected["kind"] = *t.kind;
            if (t.zeroless) expected["zeroless"] = *t.zeroless;
            if (t.unital) expected["unital"] = *t.unital;
            if (t.derived) expected["derived"] = *t.derived;
            if (t.commutative) expected["commutative"] = *t.commutative;
            if (t.semicommutative) expected["semicommutative"] = *t.semicommutative;
            if (t.quer_symmetric) expected["quer_symmetric"] = *t.quer_symmetric;
            if (t.quer_factor) expected["quer_factor"] = *t.quer_factor;
            if (!expected.empty()) j["expected"] = std::move(expected);
            entries.push_back(std::move(j));
            text << item.name;
            for (std::size_t i = item.name.size(); i < 24; ++i) text << ' ';
            text << (item.structure ? "structure" : (item.ring ? "ring     " : "quiver   "))
                 << "  " << item.summary << "\n";
        }
        report["entries"] = std::move(entries);
        return emit(report, text, opt, out, 0);
    } catch (const PolyprodError& err) {
        return emit_error(report, text, opt, out, err);
    }
}

}  // namespace polyprod::cli

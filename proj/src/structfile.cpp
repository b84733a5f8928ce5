#include "polyprod/structfile.hpp"

#include <algorithm>
#include <sstream>

#include "polyprod/textutil.hpp"

namespace polyprod {

using text::parse_i64;
using text::split;
using text::trim;

namespace {

[[noreturn]] void fail_at(std::size_t line, const std::string& message) {
    throw ParseError("line " + std::to_string(line) + ": " + message);
}

/// `product(a | b | ...)` nests; anything else is a plain carrier spec.
CarrierPtr parse_carrier_text(const std::string& text, std::int64_t param_limit) {
    std::string t = trim(text);
    if (t.rfind("product(", 0) == 0 && !t.empty() && t.back() == ')') {
        std::string body = t.substr(8, t.size() - 9);
        std::vector<std::string> parts;
        std::string current;
        int depth = 0;
        for (char c : body) {
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if (c == '|' && depth == 0) {
                parts.push_back(current);
                current.clear();
            } else {
                current += c;
            }
        }
        parts.push_back(current);
        std::vector<CarrierPtr> comps;
        comps.reserve(parts.size());
        for (const auto& p : parts) comps.push_back(parse_carrier_text(p, param_limit));
        return Carrier::product(std::move(comps));
    }
    return Carrier::make(t, param_limit);
}

std::string carrier_text(const Carrier& c) {
    if (c.kind() != Carrier::Kind::Product) return c.spec_string();
    std::string out = "product(";
    const auto& comps = c.components();
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (i) out += " | ";
        out += carrier_text(*comps[i]);
    }
    return out + ")";
}

struct Line {
    std::size_t number = 0;
    std::string text;
};

std::vector<Line> significant_lines(const std::string& text) {
    std::vector<Line> lines;
    std::size_t number = 0;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        ++number;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        std::string t = trim(raw);
        if (!t.empty()) lines.push_back({number, std::move(t)});
    }
    return lines;
}

/// "key = value" split; empty key or missing '=' is an error.
std::pair<std::string, std::string> key_value(const Line& line) {
    auto eq = line.text.find('=');
    if (eq == std::string::npos)
        fail_at(line.number, "expected 'key = value', got '" + line.text + "'");
    std::string key = trim(line.text.substr(0, eq));
    std::string value = trim(line.text.substr(eq + 1));
    if (key.empty()) fail_at(line.number, "empty key");
    return {key, value};
}

OpDecl parse_op_header(const Line& line, const std::string& body) {
    auto words = split(body, ' ');
    words.erase(std::remove(words.begin(), words.end(), std::string()), words.end());
    if (words.size() != 3)
        fail_at(line.number, "expected '[op ROLE arity=N]', got '[" + body + "]'");
    OpDecl decl;
    decl.role = words[1];
    if (decl.role != "mul" && decl.role != "add")
        fail_at(line.number, "operation role must be 'mul' or 'add', got '" + decl.role + "'");
    if (words[2].rfind("arity=", 0) != 0)
        fail_at(line.number, "expected 'arity=N', got '" + words[2] + "'");
    try {
        decl.arity = static_cast<int>(parse_i64(words[2].substr(6)));
    } catch (const PolyprodError&) {
        fail_at(line.number, "bad arity in '" + words[2] + "'");
    }
    if (decl.arity < 1) fail_at(line.number, "arity must be >= 1");
    return decl;
}

std::vector<std::string> law_list(const std::string& value) {
    std::vector<std::string> laws;
    for (const auto& piece : split(value, ',')) {
        std::string law = trim(piece);
        if (!law.empty()) laws.push_back(std::move(law));
    }
    return laws;
}

const OpDecl* find_role(const StructureDoc& doc, const std::string& role) {
    for (const auto& op : doc.ops)
        if (op.role == role) return &op;
    return nullptr;
}

std::vector<Element> parse_literals(const Carrier& carrier,
                                    const std::vector<std::string>& literals) {
    std::vector<Element> out;
    out.reserve(literals.size());
    for (const auto& text : literals) out.push_back(parse_element_in(carrier, text));
    return out;
}

}  // namespace

StructureDoc parse_structure_doc(const std::string& text) {
    auto lines = significant_lines(text);
    if (lines.empty()) throw ParseError("line 1: empty structure file (no sections)");

    StructureDoc doc;
    bool saw_carrier = false;
    bool saw_verify = false;
    // Section state: 0 none, 1 structure, 2 carrier, 3 op, 4 verify.
    int section = 0;
    OpDecl* op = nullptr;

    for (const auto& line : lines) {
        if (line.text.front() == '[') {
            if (line.text.back() != ']')
                fail_at(line.number, "unterminated section header '" + line.text + "'");
            std::string body = trim(line.text.substr(1, line.text.size() - 2));
            if (body == "structure") {
                section = 1;
            } else if (body == "carrier") {
                if (saw_carrier) fail_at(line.number, "duplicate [carrier] section");
                saw_carrier = true;
                section = 2;
            } else if (body.rfind("op", 0) == 0) {
                doc.ops.push_back(parse_op_header(line, body));
                op = &doc.ops.back();
                section = 3;
            } else if (body == "verify") {
                if (saw_verify) fail_at(line.number, "duplicate [verify] section");
                saw_verify = true;
                section = 4;
            } else {
                fail_at(line.number, "unknown section '[" + body + "]'");
            }
            continue;
        }

        auto [key, value] = key_value(line);
        switch (section) {
            case 0:
                fail_at(line.number, "'" + key + "' appears before any section header");
                break;
            case 1:
                if (key == "name")
                    doc.name = value;
                else
                    fail_at(line.number, "unknown [structure] key '" + key + "'");
                break;
            case 2:
                if (key == "kind") {
                    doc.carrier_spec = value;
                } else if (key == "param-limit") {
                    doc.param_limit = parse_i64(value);
                    if (doc.param_limit < 1) fail_at(line.number, "param-limit must be >= 1");
                } else {
                    fail_at(line.number, "unknown [carrier] key '" + key + "'");
                }
                break;
            case 3:
                if (key == "program")
                    op->program = value;
                else if (key == "quer")
                    op->quer = value;
                else if (key == "identity")
                    op->identity_literals.push_back(value);
                else if (key == "zero")
                    op->zero_literals.push_back(value);
                else
                    fail_at(line.number, "unknown [op] key '" + key + "'");
                break;
            case 4:
                if (key == "laws")
                    for (auto& law : law_list(value)) doc.laws.push_back(std::move(law));
                else
                    fail_at(line.number, "unknown [verify] key '" + key + "'");
                break;
        }
    }

    if (!saw_carrier || doc.carrier_spec.empty())
        fail_at(lines.back().number, "missing [carrier] section with a 'kind =' line");
    if (doc.ops.empty()) fail_at(lines.back().number, "no [op ...] section");
    if (doc.ops.size() > 2) fail_at(lines.back().number, "at most two operations (add, mul)");
    for (std::size_t i = 0; i < doc.ops.size(); ++i) {
        if (doc.ops[i].program.empty())
            fail_at(lines.back().number,
                    "operation '" + doc.ops[i].role + "' has no 'program =' line");
        for (std::size_t j = i + 1; j < doc.ops.size(); ++j)
            if (doc.ops[i].role == doc.ops[j].role)
                fail_at(lines.back().number, "duplicate operation role '" + doc.ops[i].role + "'");
    }
    if (doc.ops.size() == 2 && (!find_role(doc, "add") || !find_role(doc, "mul")))
        fail_at(lines.back().number, "two-operation documents need roles 'add' and 'mul'");
    return doc;
}

std::string serialize_structure_doc(const StructureDoc& doc) {
    std::ostringstream out;
    if (!doc.name.empty()) out << "[structure]\nname = " << doc.name << "\n\n";
    out << "[carrier]\nkind = " << doc.carrier_spec << "\nparam-limit = " << doc.param_limit
        << "\n";
    // Canonical order: add before mul.
    std::vector<const OpDecl*> ops;
    for (const auto& role : {std::string("add"), std::string("mul")})
        if (const OpDecl* op = find_role(doc, role)) ops.push_back(op);
    for (const OpDecl* op : ops) {
        out << "\n[op " << op->role << " arity=" << op->arity << "]\n";
        out << "program = " << op->program << "\n";
        if (op->quer) out << "quer = " << *op->quer << "\n";
        for (const auto& lit : op->identity_literals) out << "identity = " << lit << "\n";
        for (const auto& lit : op->zero_literals) out << "zero = " << lit << "\n";
    }
    if (!doc.laws.empty()) {
        out << "\n[verify]\nlaws = ";
        for (std::size_t i = 0; i < doc.laws.size(); ++i)
            out << (i ? ", " : "") << doc.laws[i];
        out << "\n";
    }
    return out.str();
}

bool is_ring_doc(const StructureDoc& doc) {
    return find_role(doc, "add") != nullptr && find_role(doc, "mul") != nullptr;
}

AlgebraicStructure build_structure(const StructureDoc& doc) {
    if (doc.ops.size() != 1)
        throw ParseError("document declares " + std::to_string(doc.ops.size()) +
                         " operations; a single-operation structure needs exactly one");
    const OpDecl& decl = doc.ops.front();
    AlgebraicStructure s;
    s.name = doc.name.empty() ? decl.program + " on " + doc.carrier_spec : doc.name;
    s.carrier = parse_carrier_text(doc.carrier_spec, doc.param_limit);
    s.mult = make_op(OpProgram::parse(decl.program, decl.arity), decl.role);
    if (decl.quer) s.quer = make_op(OpProgram::parse(*decl.quer, 1), "quer");
    s.identity_candidates = parse_literals(*s.carrier, decl.identity_literals);
    s.zero_candidates = parse_literals(*s.carrier, decl.zero_literals);
    return s;
}

PolyadicRing build_ring(const StructureDoc& doc) {
    const OpDecl* add = find_role(doc, "add");
    const OpDecl* mul = find_role(doc, "mul");
    if (!add || !mul)
        throw ParseError("a ring document needs one 'add' and one 'mul' operation");
    CarrierPtr carrier = parse_carrier_text(doc.carrier_spec, doc.param_limit);
    std::string name =
        doc.name.empty() ? "(" + std::to_string(add->arity) + "," + std::to_string(mul->arity) +
                               ")-ring on " + doc.carrier_spec
                         : doc.name;
    PolyadicRing r = make_ring(std::move(name), carrier,
                               OpProgram::parse(add->program, add->arity),
                               OpProgram::parse(mul->program, mul->arity));
    if (add->quer) r.add_quer = make_op(OpProgram::parse(*add->quer, 1), "add-quer");
    if (mul->quer) r.mul_quer = make_op(OpProgram::parse(*mul->quer, 1), "mul-quer");
    for (const auto& op : {add, mul}) {
        for (const auto& e : parse_literals(*carrier, op->identity_literals))
            r.identity_candidates.push_back(e);
        for (const auto& e : parse_literals(*carrier, op->zero_literals))
            r.zero_candidates.push_back(e);
    }
    return r;
}

StructureDoc doc_of_structure(const AlgebraicStructure& s, std::vector<std::string> laws) {
    StructureDoc doc;
    doc.name = s.name;
    doc.carrier_spec = carrier_text(*s.carrier);
    OpDecl decl;
    decl.role = s.mult.role == "add" ? "add" : "mul";
    decl.arity = s.mult.arity;
    decl.program = s.mult.program->serialize();
    if (s.quer) decl.quer = s.quer->program->serialize();
    for (const auto& e : s.identity_candidates) decl.identity_literals.push_back(e.str());
    for (const auto& e : s.zero_candidates) decl.zero_literals.push_back(e.str());
    doc.ops.push_back(std::move(decl));
    doc.laws = std::move(laws);
    return doc;
}

StructureDoc doc_of_ring(const PolyadicRing& r, std::vector<std::string> laws) {
    StructureDoc doc;
    doc.name = r.name;
    doc.carrier_spec = carrier_text(*r.carrier);
    OpDecl add;
    add.role = "add";
    add.arity = r.add.arity;
    add.program = r.add.program->serialize();
    if (r.add_quer) add.quer = r.add_quer->program->serialize();
    OpDecl mul;
    mul.role = "mul";
    mul.arity = r.mul.arity;
    mul.program = r.mul.program->serialize();
    if (r.mul_quer) mul.quer = r.mul_quer->program->serialize();
    for (const auto& e : r.identity_candidates) mul.identity_literals.push_back(e.str());
    for (const auto& e : r.zero_candidates) mul.zero_literals.push_back(e.str());
    doc.ops.push_back(std::move(add));
    doc.ops.push_back(std::move(mul));
    doc.laws = std::move(laws);
    return doc;
}

}  // namespace polyprod

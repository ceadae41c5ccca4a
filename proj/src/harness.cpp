#include "bediv/harness.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <cstdio>
#include <memory>
#include <optional>

namespace bediv {

std::string to_string(ValidityResult r) {
    switch (r) {
        case ValidityResult::Valid: return "Valid";
        case ValidityResult::Invalid: return "Invalid";
        default: return "Failure";
    }
}

bool parse_validity(const std::string& text, ValidityResult& out) {
    if (text == "Valid") { out = ValidityResult::Valid; return true; }
    if (text == "Invalid") { out = ValidityResult::Invalid; return true; }
    if (text == "Failure") { out = ValidityResult::Failure; return true; }
    return false;
}

int hit_bucket(std::uint32_t count) {
    if (count == 0) return 0;
    if (count <= 3) return static_cast<int>(count);
    if (count <= 7) return 4;
    if (count <= 15) return 5;
    if (count <= 31) return 6;
    if (count <= 127) return 7;
    return 8;
}

void RunContext::hit(BranchId branch) {
    if (branch >= static_cast<int>(index_.size())) {
        index_.resize(static_cast<std::size_t>(branch) + 1, 0);
    }
    int& slot = index_[static_cast<std::size_t>(branch)];
    if (slot == 0) {
        order_.push_back(branch);
        counts_.push_back(1);
        slot = static_cast<int>(order_.size());
    } else {
        ++counts_[static_cast<std::size_t>(slot - 1)];
    }
}

std::vector<BranchId> RunContext::covered() const {
    std::vector<BranchId> out = order_;
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t RunContext::trace_id() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint8_t b) { h = (h ^ b) * 0x100000001b3ULL; };
    for (std::size_t i = 0; i < order_.size(); ++i) {
        std::uint32_t branch = static_cast<std::uint32_t>(order_[i]);
        mix(static_cast<std::uint8_t>(branch & 0xff));
        mix(static_cast<std::uint8_t>((branch >> 8) & 0xff));
        mix(static_cast<std::uint8_t>((branch >> 16) & 0xff));
        mix(static_cast<std::uint8_t>((branch >> 24) & 0xff));
        mix(static_cast<std::uint8_t>(hit_bucket(counts_[i])));
    }
    return h;
}

namespace {
thread_local RunContext* g_active_run = nullptr;
} // namespace

void probe(BranchId branch) {
    if (g_active_run == nullptr) throw ProbeOutsideRun("probe() outside a run context");
    g_active_run->hit(branch);
}

ActiveRun::ActiveRun() : previous_(g_active_run) { g_active_run = &ctx_; }
ActiveRun::~ActiveRun() { g_active_run = previous_; }

// ---------------------------------------------------------------- bst ----

namespace bst {

enum Probe : BranchId {
    ParseOk = 0,
    ParseFail = 1,
    NodeVisited = 2,
    Leaf = 3,
    LeftPresent = 4,
    LeftAbsent = 5,
    RightPresent = 6,
    RightAbsent = 7,
    CmpOk = 8,
    CmpViolation = 9,
    ValLow = 10,
    ValHigh = 11,
    Deep = 12,
    Shallow = 13,
    Valid = 14,
    Invalid = 15,
};

struct Node {
    long value = 0;
    std::unique_ptr<Node> left, right;
};

struct Parser {
    const std::string& text;
    std::size_t pos = 0;

    bool at_end() const { return pos >= text.size(); }
    char peek() const { return at_end() ? '\0' : text[pos]; }
    bool eat(char c) {
        if (peek() != c) return false;
        ++pos;
        return true;
    }

    bool parse_int(long& out) {
        std::size_t start = pos;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) return false;
        out = std::stol(text.substr(start, pos - start));
        return true;
    }

    // child := "()" | node ; returns false on syntax error, *out null for "()"
    bool parse_child(std::unique_ptr<Node>* out) {
        if (peek() != '(') return false;
        if (pos + 1 < text.size() && text[pos + 1] == ')') {
            pos += 2;
            out->reset();
            return true;
        }
        return parse_node(out);
    }

    // node := '(' INT [' ' child ' ' child] ')'
    bool parse_node(std::unique_ptr<Node>* out) {
        if (!eat('(')) return false;
        auto node = std::make_unique<Node>();
        if (!parse_int(node->value)) return false;
        if (eat(')')) {
            *out = std::move(node);
            return true;
        }
        if (!eat(' ')) return false;
        if (!parse_child(&node->left)) return false;
        if (!eat(' ')) return false;
        if (!parse_child(&node->right)) return false;
        if (!eat(')')) return false;
        *out = std::move(node);
        return true;
    }
};

std::unique_ptr<Node> parse(const std::string& text) {
    Parser p{text};
    std::unique_ptr<Node> root;
    if (p.peek() == '(') {
        if (!p.parse_node(&root)) return nullptr;
    } else {
        // Childless root renders as a bare integer.
        root = std::make_unique<Node>();
        if (!p.parse_int(root->value)) return nullptr;
    }
    return p.at_end() ? std::move(root) : nullptr;
}

bool check(const Node& node, long lo, long hi, int depth) {
    probe(Probe::NodeVisited);
    probe(depth >= 3 ? Probe::Deep : Probe::Shallow);
    probe(node.value <= 5 ? Probe::ValLow : Probe::ValHigh);
    bool ok = node.value > lo && node.value < hi;
    probe(ok ? Probe::CmpOk : Probe::CmpViolation);
    if (!node.left && !node.right) probe(Probe::Leaf);
    if (node.left) {
        probe(Probe::LeftPresent);
        ok = check(*node.left, lo, std::min(hi, node.value), depth + 1) && ok;
    } else {
        probe(Probe::LeftAbsent);
    }
    if (node.right) {
        probe(Probe::RightPresent);
        ok = check(*node.right, std::max(lo, node.value), hi, depth + 1) && ok;
    } else {
        probe(Probe::RightAbsent);
    }
    return ok;
}

} // namespace bst

ValidityResult bst_checker(const std::string& text) {
    auto root = bst::parse(text);
    if (!root) {
        probe(bst::Probe::ParseFail);
        return ValidityResult::Invalid;
    }
    probe(bst::Probe::ParseOk);
    bool ok = bst::check(*root, LONG_MIN, LONG_MAX, 0);
    probe(ok ? bst::Probe::Valid : bst::Probe::Invalid);
    return ok ? ValidityResult::Valid : ValidityResult::Invalid;
}

// ---------------------------------------------------------------- xml ----

namespace xml {

enum Probe : BranchId {
    ParseOk = 100,
    ParseFail = 101,
    RootOk = 102,
    RootBad = 103,
    NestOk = 104,
    NestBad = 105,
    AttrOk = 106,
    AttrBad = 107,
    DepthOk = 108,
    DepthBad = 109,
    HasText = 110,
    NoText = 111,
    TagLow = 112,
    TagHigh = 113,
    Leaf = 114,
    Internal = 115,
    Valid = 116,
    Invalid = 117,
};

struct Element {
    int tag = 0; // 0..9 for 'a'..'j'
    bool has_attr = false;
    std::string text;
    std::vector<Element> children;
};

struct Parser {
    const std::string& text;
    std::size_t pos = 0;

    bool at_end() const { return pos >= text.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos + ahead < text.size() ? text[pos + ahead] : '\0';
    }
    bool eat(char c) {
        if (peek() != c) return false;
        ++pos;
        return true;
    }
    bool eat_str(const char* s) {
        std::size_t n = std::char_traits<char>::length(s);
        if (text.compare(pos, n, s) != 0) return false;
        pos += n;
        return true;
    }

    bool parse_element(Element* out) {
        if (!eat('<')) return false;
        char tag = peek();
        if (tag < 'a' || tag > 'j') return false;
        ++pos;
        out->tag = tag - 'a';
        if (eat_str(" id=\"")) {
            out->has_attr = true;
            while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
            if (!eat('"')) return false;
        }
        if (!eat('>')) return false;
        if (peek() == '<' && peek(1) != '/') {
            while (peek() == '<' && peek(1) != '/') {
                Element child;
                if (!parse_element(&child)) return false;
                out->children.push_back(std::move(child));
            }
        } else {
            while (!at_end() && peek() != '<') out->text += text[pos++];
        }
        if (!eat_str("</")) return false;
        if (!eat(tag)) return false;
        return eat('>');
    }
};

// Fixed schema: root tag in {a,b,c}; a child's tag must come strictly after
// its parent's in the alphabet; attributes only on even-index tags; nesting
// depth at most 3 below the root.
bool check(const Element& e, int depth, bool is_root) {
    bool ok = true;
    probe(e.tag < 5 ? Probe::TagLow : Probe::TagHigh);
    if (is_root) {
        bool root_ok = e.tag <= 2;
        probe(root_ok ? Probe::RootOk : Probe::RootBad);
        ok = root_ok;
    }
    if (e.has_attr) {
        bool attr_ok = e.tag % 2 == 0;
        probe(attr_ok ? Probe::AttrOk : Probe::AttrBad);
        ok = ok && attr_ok;
    }
    bool depth_ok = depth <= 3;
    probe(depth_ok ? Probe::DepthOk : Probe::DepthBad);
    ok = ok && depth_ok;
    if (e.children.empty()) {
        probe(Probe::Leaf);
        probe(e.text.empty() ? Probe::NoText : Probe::HasText);
    } else {
        probe(Probe::Internal);
        for (const Element& child : e.children) {
            bool nest_ok = child.tag > e.tag;
            probe(nest_ok ? Probe::NestOk : Probe::NestBad);
            ok = check(child, depth + 1, false) && ok && nest_ok;
        }
    }
    return ok;
}

} // namespace xml

ValidityResult xml_validator(const std::string& text) {
    xml::Parser p{text};
    xml::Element root;
    if (!p.parse_element(&root) || !p.at_end()) {
        probe(xml::Probe::ParseFail);
        return ValidityResult::Invalid;
    }
    probe(xml::Probe::ParseOk);
    bool ok = xml::check(root, 0, true);
    probe(ok ? xml::Probe::Valid : xml::Probe::Invalid);
    return ok ? ValidityResult::Valid : ValidityResult::Invalid;
}

// --------------------------------------------------------------- expr ----

namespace expr {

enum Probe : BranchId {
    ParseOk = 200,
    ParseFail = 201,
    Lit = 202,
    Var = 203,
    Bin = 204,
    Let = 205,
    OpAdd = 206,
    OpSub = 207,
    OpMul = 208,
    OpDiv = 209,
    FreeVar = 210,
    DivZero = 211,
    Neg = 212,
    Zero = 213,
    Pos = 214,
    Deep = 215,
    BoundVar = 216,
    OutOfBounds = 217,
    Valid = 218,
    Invalid = 219,
};

struct Node {
    enum Kind { Literal, Variable, Binary, LetBinding } kind = Literal;
    long lit = 0;
    int var = 0;
    char op = '+';
    std::unique_ptr<Node> left, right;
};

struct Parser {
    const std::string& text;
    std::size_t pos = 0;

    bool at_end() const { return pos >= text.size(); }
    char peek() const { return at_end() ? '\0' : text[pos]; }
    bool eat(char c) {
        if (peek() != c) return false;
        ++pos;
        return true;
    }
    bool eat_str(const char* s) {
        std::size_t n = std::char_traits<char>::length(s);
        if (text.compare(pos, n, s) != 0) return false;
        pos += n;
        return true;
    }

    bool parse_var_index(int* out) {
        char c = peek();
        if (c < '0' || c > '3') return false;
        ++pos;
        *out = c - '0';
        return true;
    }

    bool parse_expr(std::unique_ptr<Node>* out) {
        auto node = std::make_unique<Node>();
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            std::size_t start = pos;
            while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
            node->kind = Node::Literal;
            node->lit = std::stol(text.substr(start, pos - start));
        } else if (eat('x')) {
            node->kind = Node::Variable;
            if (!parse_var_index(&node->var)) return false;
        } else if (eat('(')) {
            if (eat_str("let x")) {
                node->kind = Node::LetBinding;
                if (!parse_var_index(&node->var)) return false;
                if (!eat_str(" = ")) return false;
                if (!parse_expr(&node->left)) return false;
                if (!eat_str(" in ")) return false;
                if (!parse_expr(&node->right)) return false;
                if (!eat(')')) return false;
            } else {
                node->kind = Node::Binary;
                if (!parse_expr(&node->left)) return false;
                if (!eat(' ')) return false;
                char op = peek();
                if (op != '+' && op != '-' && op != '*' && op != '/') return false;
                ++pos;
                node->op = op;
                if (!eat(' ')) return false;
                if (!parse_expr(&node->right)) return false;
                if (!eat(')')) return false;
            }
        } else {
            return false;
        }
        *out = std::move(node);
        return true;
    }
};

struct InvalidEval {};

constexpr long kValueBound = 1'000'000'000L;
constexpr int kNestingGuard = 6;

long eval(const Node& node, std::optional<long> env[4], int depth, bool faults) {
    if (depth >= kNestingGuard) {
        probe(Probe::Deep);
        if (faults) throw SutFault(kFaultDeepNesting, "nesting overflow guard");
    }
    long v = 0;
    switch (node.kind) {
        case Node::Literal:
            probe(Probe::Lit);
            v = node.lit;
            break;
        case Node::Variable:
            probe(Probe::Var);
            if (!env[node.var]) {
                probe(Probe::FreeVar);
                throw InvalidEval{};
            }
            probe(Probe::BoundVar);
            v = *env[node.var];
            break;
        case Node::Binary: {
            probe(Probe::Bin);
            if (faults && node.op == '*' && node.right->kind == Node::Binary &&
                node.right->op == '-') {
                throw SutFault(kFaultOperatorPair, "operator-pair pattern");
            }
            long l = eval(*node.left, env, depth + 1, faults);
            long r = eval(*node.right, env, depth + 1, faults);
            switch (node.op) {
                case '+': probe(Probe::OpAdd); v = l + r; break;
                case '-': probe(Probe::OpSub); v = l - r; break;
                case '*': probe(Probe::OpMul); v = l * r; break;
                default:
                    probe(Probe::OpDiv);
                    if (r == 0) {
                        if (faults && node.right->kind == Node::Literal && node.right->lit == 0) {
                            throw SutFault(kFaultDivByLiteralZero, "division by literal zero");
                        }
                        probe(Probe::DivZero);
                        throw InvalidEval{};
                    }
                    v = l / r;
            }
            break;
        }
        case Node::LetBinding: {
            probe(Probe::Let);
            long bound = eval(*node.left, env, depth + 1, faults);
            std::optional<long> saved = env[node.var];
            env[node.var] = bound;
            v = eval(*node.right, env, depth + 1, faults);
            env[node.var] = saved;
            break;
        }
    }
    if (std::abs(v) > kValueBound) {
        probe(Probe::OutOfBounds);
        throw InvalidEval{};
    }
    probe(v < 0 ? Probe::Neg : (v == 0 ? Probe::Zero : Probe::Pos));
    return v;
}

} // namespace expr

ValidityResult expr_eval(const std::string& text, bool seeded_faults) {
    expr::Parser p{text};
    std::unique_ptr<expr::Node> root;
    if (!p.parse_expr(&root) || !p.at_end()) {
        probe(expr::Probe::ParseFail);
        return ValidityResult::Invalid;
    }
    probe(expr::Probe::ParseOk);
    std::optional<long> env[4];
    try {
        expr::eval(*root, env, 1, seeded_faults);
    } catch (const expr::InvalidEval&) {
        probe(expr::Probe::Invalid);
        return ValidityResult::Invalid;
    }
    probe(expr::Probe::Valid);
    return ValidityResult::Valid;
}

// ------------------------------------------------------------- runner ----

ExecutionRecord run(const BenchmarkSut& sut, const std::string& concrete) {
    ActiveRun scope;
    ExecutionRecord record;
    try {
        record.result = sut.body(concrete);
    } catch (const SutFault& fault) {
        record.result = ValidityResult::Failure;
        record.fault_site = fault.site;
    } catch (const std::exception&) {
        record.result = ValidityResult::Failure;
    }
    record.covered = scope.context().covered();
    record.trace_id = scope.context().trace_id();
    return record;
}

ExecutionRecord run(const BenchmarkSut& sut, const GeneratedInput& input) {
    return run(sut, input.concrete);
}

const BenchmarkSut* find_sut(const std::string& name) {
    static const std::vector<BenchmarkSut> suts = {
        {"bst", [](const std::string& t) { return bst_checker(t); }, false},
        {"xml", [](const std::string& t) { return xml_validator(t); }, false},
        {"expr", [](const std::string& t) { return expr_eval(t, true); }, true},
    };
    for (const BenchmarkSut& sut : suts) {
        if (sut.name == name) return &sut;
    }
    return nullptr;
}

std::vector<std::string> sut_names() { return {"bst", "xml", "expr"}; }

std::string trace_log_line(std::uint64_t run_index, const ExecutionRecord& record) {
    char head[64];
    std::snprintf(head, sizeof head, "%llu,%s,%016llx",
                  static_cast<unsigned long long>(run_index),
                  to_string(record.result).c_str(),
                  static_cast<unsigned long long>(record.trace_id));
    std::string line = head;
    for (BranchId b : record.covered) {
        line += ',';
        line += std::to_string(b);
    }
    return line;
}

} // namespace bediv

#include "bediv/generators.hpp"

#include <map>

namespace bediv {

namespace {

// --- binary tree (Fig. 2 shape: value, then left/right child decisions) ---

std::string tree_node(SplitParameterSequence& src, int depth, int max_depth, bool is_root) {
    std::int64_t value = src.choose_int(ChoiceKind::Value, 0, 10);
    std::string left, right;
    bool has_left = false, has_right = false;
    if (depth < max_depth) {
        has_left = src.choose_bool(ChoiceKind::Structural);
        if (has_left) left = tree_node(src, depth + 1, max_depth, false);
        has_right = src.choose_bool(ChoiceKind::Structural);
        if (has_right) right = tree_node(src, depth + 1, max_depth, false);
    }
    if (!has_left && !has_right) {
        if (is_root) return std::to_string(value);
        return "(" + std::to_string(value) + ")";
    }
    std::string out = "(" + std::to_string(value) + " ";
    out += has_left ? left : "()";
    out += " ";
    out += has_right ? right : "()";
    out += ")";
    return out;
}

// --- XML-like document over a fixed 10-tag alphabet ---

const std::vector<std::string> kXmlTags = {"a", "b", "c", "d", "e",
                                           "f", "g", "h", "i", "j"};

std::string xml_element(SplitParameterSequence& src, int depth, int max_depth, int max_children) {
    std::string tag = src.choose_from(ChoiceKind::Value, kXmlTags);
    bool has_attr = src.choose_bool(ChoiceKind::Structural);
    std::string open = "<" + tag;
    if (has_attr) {
        std::int64_t attr = src.choose_int(ChoiceKind::Value, 0, 99);
        open += " id=\"" + std::to_string(attr) + "\"";
    }
    open += ">";
    std::int64_t n_children = 0;
    if (depth < max_depth) {
        n_children = src.choose_int(ChoiceKind::Structural, 0, max_children);
    }
    std::string body;
    if (n_children == 0) {
        bool has_text = src.choose_bool(ChoiceKind::Structural);
        if (has_text) {
            std::int64_t text = src.choose_int(ChoiceKind::Value, 0, 999);
            body = std::to_string(text);
        }
    } else {
        for (std::int64_t i = 0; i < n_children; ++i) {
            body += xml_element(src, depth + 1, max_depth, max_children);
        }
    }
    return open + body + "</" + tag + ">";
}

// --- arithmetic / let expressions ---

const std::vector<char> kExprOps = {'+', '-', '*', '/'};

std::string expr_literal(SplitParameterSequence& src) {
    return std::to_string(src.choose_int(ChoiceKind::Value, 0, 9));
}

std::string expr_node(SplitParameterSequence& src, int depth, int max_depth) {
    if (depth >= max_depth) return expr_literal(src);
    std::int64_t type = src.choose_int(ChoiceKind::Structural, 0, 3);
    switch (type) {
        case 0:
            return expr_literal(src);
        case 1: {
            std::int64_t idx = src.choose_int(ChoiceKind::Value, 0, 3);
            return "x" + std::to_string(idx);
        }
        case 2: {
            char op = src.choose_from(ChoiceKind::Value, kExprOps);
            std::string l = expr_node(src, depth + 1, max_depth);
            std::string r = expr_node(src, depth + 1, max_depth);
            return "(" + l + " " + op + " " + r + ")";
        }
        default: {
            std::int64_t idx = src.choose_int(ChoiceKind::Value, 0, 3);
            std::string bound = expr_node(src, depth + 1, max_depth);
            std::string body = expr_node(src, depth + 1, max_depth);
            return "(let x" + std::to_string(idx) + " = " + bound + " in " + body + ")";
        }
    }
}

GeneratedInput finish(SplitParameterSequence& src, std::string concrete) {
    GeneratedInput input;
    input.concrete = std::move(concrete);
    input.signature = src.structural_signature();
    input.source_snapshot = src.consumed_snapshot();
    return input;
}

const std::map<std::string, GeneratorSpec>& specs() {
    static const std::map<std::string, GeneratorSpec> table = {
        {"tree",
         {"tree",
          kTreeDefaultDepth,
          {{"tree/node_value", 11, ChoiceKind::Value},
           {"tree/has_left", 2, ChoiceKind::Structural},
           {"tree/has_right", 2, ChoiceKind::Structural}}}},
        {"xml",
         {"xml",
          kXmlDefaultDepth,
          {{"xml/tag_index", kXmlTags.size(), ChoiceKind::Value},
           {"xml/has_attr", 2, ChoiceKind::Structural},
           {"xml/attr_value", 100, ChoiceKind::Value},
           {"xml/child_count", kXmlDefaultChildren + 1, ChoiceKind::Structural},
           {"xml/has_text", 2, ChoiceKind::Structural},
           {"xml/text_content", 1000, ChoiceKind::Value}}}},
        {"expr",
         {"expr",
          kExprDefaultDepth,
          {{"expr/node_type", 4, ChoiceKind::Structural},
           {"expr/literal_value", 10, ChoiceKind::Value},
           {"expr/variable_index", 4, ChoiceKind::Value},
           {"expr/operator", kExprOps.size(), ChoiceKind::Value},
           {"expr/let_index", 4, ChoiceKind::Value}}}},
    };
    return table;
}

} // namespace

GeneratedInput generate_tree(SplitParameterSequence& source, int max_depth) {
    return finish(source, tree_node(source, 0, max_depth, true));
}

GeneratedInput generate_xml(SplitParameterSequence& source, int max_depth, int max_children) {
    return finish(source, xml_element(source, 0, max_depth, max_children));
}

GeneratedInput generate_expr(SplitParameterSequence& source, int max_depth) {
    // Depth is 1-based so that max_depth == 1 yields a bare literal.
    return finish(source, expr_node(source, 1, max_depth));
}

GeneratorFn find_generator(const std::string& name) {
    if (name == "tree") {
        return [](SplitParameterSequence& s) { return generate_tree(s, kTreeDefaultDepth); };
    }
    if (name == "xml") {
        return [](SplitParameterSequence& s) {
            return generate_xml(s, kXmlDefaultDepth, kXmlDefaultChildren);
        };
    }
    if (name == "expr") {
        return [](SplitParameterSequence& s) { return generate_expr(s, kExprDefaultDepth); };
    }
    return {};
}

const GeneratorSpec* find_generator_spec(const std::string& name) {
    auto it = specs().find(name);
    return it == specs().end() ? nullptr : &it->second;
}

std::vector<std::string> generator_names() {
    std::vector<std::string> names;
    for (const auto& [name, spec] : specs()) names.push_back(name);
    return names;
}

} // namespace bediv

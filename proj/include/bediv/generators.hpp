#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bediv/choice_source.hpp"

namespace bediv {

// One generated input: the canonical serialization, the structural identity,
// and the exact bytes consumed. Regenerating from source_snapshot reproduces
// concrete byte-for-byte.
struct GeneratedInput {
    std::string concrete;
    StructuralSignature signature;
    ParamsSnapshot source_snapshot;
};

struct GeneratorSpec {
    std::string name;
    int max_depth = 1;
    std::vector<ChoicePoint> choice_points;
};

// Binary tree generator. Node values are value choices in [0, 10]; the
// left/right child decisions are structural. Serialization is parenthesized
// preorder: a childless root renders bare ("3"), any other node renders as
// "(value left right)" with absent children as "()" and leaves as "(value)".
GeneratedInput generate_tree(SplitParameterSequence& source, int max_depth);

// XML-like document generator over a fixed 10-tag alphabet. Child-count,
// has-attribute and has-text decisions are structural; tag index, attribute
// values and text content are value choices. Whitespace-free rendering.
GeneratedInput generate_xml(SplitParameterSequence& source, int max_depth, int max_children);

// Arithmetic/let expression generator. The node-type choice (literal |
// variable | binary-op | let) is structural; literal values, variable
// indices and operator selection are value choices.
GeneratedInput generate_expr(SplitParameterSequence& source, int max_depth);

constexpr int kTreeDefaultDepth = 5;
constexpr int kXmlDefaultDepth = 4;
constexpr int kXmlDefaultChildren = 3;
constexpr int kExprDefaultDepth = 6;

using GeneratorFn = std::function<GeneratedInput(SplitParameterSequence&)>;

// Registry of the bundled generators ("tree", "xml", "expr") with default
// bounds. Returns an empty function for unknown names.
GeneratorFn find_generator(const std::string& name);
const GeneratorSpec* find_generator_spec(const std::string& name);
std::vector<std::string> generator_names();

} // namespace bediv

#pragma once

// Words in a finite generator alphabet and the orders used on them.
//
// The term order (storage, listing, rendering) is degree-lexicographic:
// shorter words first, ties broken letter by letter by generator index.
// Rule orientation is validated against a reduction order that may weight
// generators (total weight, then length, then lex); with all-unit weights it
// coincides with the term order. Both are multiplication-compatible
// well-orders, so oriented rewriting terminates.

#include <string>
#include <vector>

namespace qpb {

using Word = std::vector<int>;  // generator indices; the empty word is the unit

struct GeneratorTable {
    std::vector<std::string> names;  // position = generator order
    std::vector<int> weights;        // reduction-order weights; empty = all 1

    int size() const { return static_cast<int>(names.size()); }
    int index_of(const std::string& name) const;  // -1 if absent
    int weight_of(int gen) const { return weights.empty() ? 1 : weights[static_cast<size_t>(gen)]; }
};

struct DegLexLess {
    bool operator()(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

long word_weight(const Word& w, const GeneratorTable& gens);
bool reduction_less(const Word& a, const Word& b, const GeneratorTable& gens);

std::string word_to_string(const Word& w, const GeneratorTable& gens);

}  // namespace qpb

#include "qpb/word.hpp"

namespace qpb {

int GeneratorTable::index_of(const std::string& name) const {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    return -1;
}

long word_weight(const Word& w, const GeneratorTable& gens) {
    long total = 0;
    for (int g : w) total += gens.weight_of(g);
    return total;
}

bool reduction_less(const Word& a, const Word& b, const GeneratorTable& gens) {
    long wa = word_weight(a, gens), wb = word_weight(b, gens);
    if (wa != wb) return wa < wb;
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

std::string word_to_string(const Word& w, const GeneratorTable& gens) {
    if (w.empty()) return "1";
    std::string out;
    size_t i = 0;
    while (i < w.size()) {
        size_t run = i + 1;
        while (run < w.size() && w[run] == w[i]) ++run;
        if (i) out += "*";
        out += gens.names[static_cast<size_t>(w[i])];
        if (run - i > 1) out += "^" + std::to_string(run - i);
        i = run;
    }
    return out;
}

}  // namespace qpb

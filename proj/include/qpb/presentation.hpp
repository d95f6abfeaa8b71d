#pragma once

// Generator/relation presentation with an oriented, degree-certified
// rewriting system.
//
// Every rule rewrites its lhs word into an element whose words are strictly
// smaller in the reduction order, so leftmost-innermost rewriting terminates;
// a step budget guards against combinatorial blowup on adversarial inputs.
// Confluence is never assumed: presets ship rule sets that confluence_check
// certifies up to the working degree.

#include "qpb/element.hpp"
#include "qpb/qrat.hpp"
#include "qpb/word.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qpb {

class Presentation;
using PresPtr = std::shared_ptr<const Presentation>;

struct RewriteRule {
    Word lhs;
    NCElement rhs;
    bool inhomogeneous = false;  // exempt from grading validation (e.g. a determinant rule)
    bool derived = false;        // consequence of the defining rules
};

struct ConfluenceFailure {
    size_t rule_a = 0, rule_b = 0;
    Word overlap;
    NCElement normal_a, normal_b;
};

struct ConfluenceReport {
    std::vector<ConfluenceFailure> failures;
    size_t pairs_checked = 0;
    bool ok() const { return failures.empty(); }
};

class Presentation {
public:
    // validate=true enforces the invariants: distinct lhs, strictly
    // decreasing orientation, rhs in normal form, grading respected by
    // non-flagged rules, declared generator inverses actually inverse.
    // validate=false admits adversarial rule sets for confluence experiments.
    static std::shared_ptr<const Presentation> make(std::string name, GeneratorTable gens,
                                                    std::vector<RewriteRule> rules,
                                                    std::vector<int> grading = {},
                                                    std::vector<int> inverse_gen = {},
                                                    bool validate = true);

    const std::string& name() const { return name_; }
    const GeneratorTable& gens() const { return gens_; }
    const std::vector<RewriteRule>& rules() const { return rules_; }
    const std::vector<int>& grading() const { return grading_; }  // empty if ungraded
    int inverse_gen(int g) const { return inverse_gen_.empty() ? -1 : inverse_gen_[static_cast<size_t>(g)]; }

    long step_budget() const { return step_budget_; }
    void set_step_budget(long b) const { step_budget_ = b; }  // tuning knob, not logical state

    NCElement unit() const { return NCElement::unit(this); }
    NCElement gen(int idx) const;
    NCElement gen(const std::string& name) const;
    NCElement element(Word w, QRat c = QRat::one()) const { return reduce_word(std::move(w), std::move(c)); }

    bool is_irreducible(const Word& w) const;
    NCElement reduce_word(Word w, QRat coeff) const;
    NCElement reduce(const NCElement& x) const;
    NCElement multiply(const NCElement& x, const NCElement& y) const;

    // All irreducible words of degree <= maxdeg, listed in the term order.
    std::vector<Word> monomial_basis(int maxdeg) const;

    ConfluenceReport confluence_check(int maxdeg) const;

    // Coefficients c with target = sum c_i * span_i, or nullopt. The
    // solution taken is the echelon particular solution with spanning
    // vectors considered in the given order (free coefficients zero).
    static std::optional<std::vector<QRat>> solve_membership(const NCElement& target,
                                                             const std::vector<NCElement>& span);

    // Word-length grade; total of the declared grading if present.
    long graded_degree(const Word& w) const;

private:
    Presentation() = default;
    // leftmost match of any rule lhs at or after position from; rule index or -1
    int match_at_(const Word& w, size_t pos) const;

    std::string name_;
    GeneratorTable gens_;
    std::vector<RewriteRule> rules_;
    std::vector<int> grading_;
    std::vector<int> inverse_gen_;
    std::vector<std::vector<size_t>> rules_by_first_;  // rule indices bucketed by lhs front
    mutable long step_budget_ = 1000000;
};

}  // namespace qpb

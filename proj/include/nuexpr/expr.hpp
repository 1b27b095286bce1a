#ifndef NUEXPR_EXPR_HPP
#define NUEXPR_EXPR_HPP

#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "nuexpr/value.hpp"

namespace nuexpr {

struct Expr;
/// Expressions are immutable and shared; operations that rewrite (e.g.
/// substitution) reuse untouched subtrees, so large expressions form DAGs.
using ExprPtr = std::shared_ptr<const Expr>;

struct VarExpr {
    std::string name;
};

struct NuExpr {
    std::string var;
    ExprPtr body;
};

struct ModalExpr {
    Modality op;
    std::vector<ExprPtr> args;
};

struct Expr {
    std::variant<VarExpr, NuExpr, ModalExpr> node;

    const VarExpr* as_var() const { return std::get_if<VarExpr>(&node); }
    const NuExpr* as_nu() const { return std::get_if<NuExpr>(&node); }
    const ModalExpr* as_modal() const { return std::get_if<ModalExpr>(&node); }
};

ExprPtr make_var(std::string name);
ExprPtr make_nu(std::string var, ExprPtr body);
/// Validates that args.size() matches the modality arity.
ExprPtr make_modal(Modality op, std::vector<ExprPtr> args);

std::set<std::string> free_vars(const ExprPtr& e);

/// Memoizes free-variable sets per node across a batch of queries, so that
/// repeated lookups on shared subtrees stay cheap.
class FreeVarTable {
public:
    const std::set<std::string>& operator()(const ExprPtr& e);

private:
    std::unordered_map<const Expr*, std::set<std::string>> cache_;
};

struct Wellformedness {
    bool closed = true;
    bool guarded = true;
    std::string diagnostic; // first violation, empty when both hold

    bool ok() const { return closed && guarded; }
};

/// Checks membership in the admissible expression class: no free variables
/// and every bound variable occurrence separated from its binder by at least
/// one modality.
Wellformedness check_wellformed(const ExprPtr& e);

bool alpha_eq(const ExprPtr& a, const ExprPtr& b);

/// A string key that is equal exactly for alpha-equivalent expressions
/// (binders replaced by de Bruijn indices).
std::string alpha_key(const ExprPtr& e);

/// Renames binders to v0, v1, .. in preorder (skipping names that occur
/// free), giving a canonical representative of the alpha class.
ExprPtr alpha_canonicalize(const ExprPtr& e);

/// Capture-avoiding substitution of replacement for every free occurrence of
/// var. Subtrees without the variable are shared, not copied.
ExprPtr substitute(const ExprPtr& e, const std::string& var, const ExprPtr& replacement);

/// For e = nu z. body: body with e substituted for z. Throws otherwise.
ExprPtr unfold(const ExprPtr& e);

/// The closure of e under subexpressions and unfolding of fixpoints, each
/// member alpha-canonicalized, in breadth-first discovery order from e. For
/// admissible e this is finite.
std::vector<ExprPtr> fischer_ladner_closure(const ExprPtr& e);

/// Concrete syntax: "nu x. [1](x, nu y. [0](y, x))". Nullary modalities print
/// without parentheses.
std::string print_expr(const ExprPtr& e);

/// Parses the concrete syntax. The config decides how bracket payloads are
/// read (dfa bit, lts labels, dist weights, mon group sizes) and fixes the
/// dfa arity. '#' starts a line comment.
ExprPtr parse_expr(const std::string& text, const FunctorConfig& config);

} // namespace nuexpr

#endif

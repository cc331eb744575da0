#pragma once

// Binding discipline: free variables, α-equivalence, and the two families of
// capture-avoiding substitution (term for variable, stage for stage variable).

#include <set>

#include "lmd/syntax.hpp"

namespace lmd {

using NameSet = std::set<Name>;

NameSet free_vars(const Term& t);
NameSet free_vars(const Type& t);
NameSet free_vars(const Kind& k);

NameSet free_stage_vars(const Term& t);
NameSet free_stage_vars(const Type& t);
NameSet free_stage_vars(const Kind& k);
NameSet free_stage_vars(const Stage& s);
/// Stage variables of every entry's type and stage.
NameSet free_stage_vars(const TypeEnv& env);

/// Every name occurring anywhere (free or bound) in the node.
void collect_names(const Term& t, NameSet& out);
void collect_names(const Type& t, NameSet& out);

/// First name of the form base, base_1, base_2, ... not contained in `avoid`.
/// `base` itself is returned when it is free to use.
Name fresh_name(const Name& base, const NameSet& avoid);

// --- term substitution  t[x ↦ N] ------------------------------------------

Term subst(const Term& t, const Name& x, const Term& n);
Type subst(const Type& t, const Name& x, const Term& n);
Kind subst(const Kind& k, const Name& x, const Term& n);
/// Substitutes into each entry's type; the entry for x itself is removed.
TypeEnv subst(const TypeEnv& env, const Name& x, const Term& n);

// --- stage substitution  t[α ↦ A] -----------------------------------------

Term subst_stage(const Term& t, const StageVar& a, const Stage& s);
Type subst_stage(const Type& t, const StageVar& a, const Stage& s);
Kind subst_stage(const Kind& k, const StageVar& a, const Stage& s);
Stage subst_stage(const Stage& b, const StageVar& a, const Stage& s);
TypeEnv subst_stage(const TypeEnv& env, const StageVar& a, const Stage& s);

/// Renames a bound variable: body[x ↦ y] where y is a fresh Var.
Term rename_var(const Term& body, const Name& from, const Name& to);
Type rename_var(const Type& body, const Name& from, const Name& to);
Kind rename_var(const Kind& body, const Name& from, const Name& to);

// --- α-equivalence --------------------------------------------------------

bool alpha_eq(const Term& a, const Term& b);
bool alpha_eq(const Type& a, const Type& b);
bool alpha_eq(const Kind& a, const Kind& b);

// --- measures -------------------------------------------------------------

/// Number of term nodes (type annotations not included).
std::size_t term_size(const Term& t);
/// Number of StageLam nodes.
std::size_t stage_lam_count(const Term& t);

/// Renames bound term and stage variables so that binder names are pairwise
/// distinct and distinct from every free name. Binders keep their name when
/// it is already unique.
Term rename_apart(const Term& t);

}  // namespace lmd

// Built-in theory constructors.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <memory>

#include "kmt/theory.hpp"

namespace kmt {

std::unique_ptr<Theory> make_bitvec_theory();
std::unique_ptr<Theory> make_incnat_theory();
std::unique_ptr<Theory> make_prod_theory(std::unique_ptr<Theory> left,
                                         std::unique_ptr<Theory> right);
std::unique_ptr<Theory> make_set_theory(std::unique_ptr<Theory> inner);
std::unique_ptr<Theory> make_map_theory(std::unique_ptr<Theory> inner);
std::unique_ptr<Theory> make_ltlf_theory(std::unique_ptr<Theory> inner);
std::unique_ptr<Theory> make_netkat_theory();
std::unique_ptr<Theory> make_sp_theory();

// Registers the canonical handles once.
void ensure_builtin_theories();

// Payload helpers shared by theories and tests.
TermId bv_eq(const std::string& b);
TermId bv_set(const std::string& b);
TermId bv_unset(const std::string& b);

TermId inat_gt(const std::string& x, int64_t n);
TermId inat_inc(const std::string& x);
TermId inat_assign(const std::string& x, int64_t n);
// e=c over inner naturals, lowered to the x>n fragment
TermId inat_expr_eq(const NatExpr& e, int64_t c);

TermId set_in(const std::string& x, int64_t c);
TermId set_insert(const std::string& x, const NatExpr& e);
TermId set_remove(const std::string& x, const NatExpr& e);

TermId map_read(const std::string& x, const NatExpr& key, int64_t val);
TermId map_write(const std::string& x, int64_t key, const NatExpr& val);

TermId ltlf_last(TermId a);
TermId ltlf_since(TermId a, TermId b);
TermId ltlf_noop();
TermId ltlf_ever(TermId a);
TermId ltlf_always(TermId a);
TermId ltlf_start();
TermId ltlf_wlast(TermId a);
TermId ltlf_backto(TermId a, TermId b);

TermId nk_eq(const std::string& f, const std::string& v);
TermId nk_assign(const std::string& f, const std::string& v);

constexpr int64_t kSpInf = INT64_MAX;
TermId sp_lt(const std::string& x, int64_t n);
TermId sp_minp(const std::string& x, const std::vector<std::string>& args);

}  // namespace kmt

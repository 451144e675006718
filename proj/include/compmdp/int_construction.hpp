#pragma once

// Bidirectional composition built from rightward sequential composition, sum,
// trace and the two wire families. The same code drives the structural
// composites (open MDPs) and the semantic ones (sets of Markov chain arrows),
// so both sides always agree on port order.

#include <concepts>
#include <cstddef>

#include "compmdp/model.hpp"

namespace compmdp {

template <class Ops>
concept TracedMonoidalOps = requires(const Ops& ops, const typename Ops::Arrow& a, std::size_t n) {
    { ops.identity(n) } -> std::same_as<typename Ops::Arrow>;
    { ops.swap(n, n) } -> std::same_as<typename Ops::Arrow>;
    { ops.seq(a, a) } -> std::same_as<typename Ops::Arrow>;
    { ops.sum(a, a) } -> std::same_as<typename Ops::Arrow>;
    { ops.trace(n, a) } -> std::same_as<typename Ops::Arrow>;
};

// a : (m>, m<) -> (l>, l<) and b : (l>, l<) -> (n>, n<), both given in twisted form.
template <TracedMonoidalOps Ops>
typename Ops::Arrow int_seq(const Ops& ops, const typename Ops::Arrow& a, Arity a_dom, Arity mid,
                            const typename Ops::Arrow& b, Arity b_cod) {
    const std::size_t mr = a_dom.right, ml = a_dom.left;
    const std::size_t lr = mid.right, ll = mid.left;
    const std::size_t nr = b_cod.right, nl = b_cod.left;

    auto body = ops.seq(ops.sum(ops.swap(ll, mr), ops.identity(nl)), ops.sum(a, ops.identity(nl)));
    body = ops.seq(body, ops.sum(ops.identity(lr), ops.swap(ml, nl)));
    body = ops.seq(body, ops.sum(b, ops.identity(ml)));
    body = ops.seq(body, ops.sum(ops.swap(nr, ll), ops.identity(ml)));
    return ops.trace(ll, body);
}

// a : (m>, m<) -> (n>, n<), b : (k>, k<) -> (l>, l<); the result has type
// (m>+k>, k<+m<) -> (n>+l>, l<+n<).
template <TracedMonoidalOps Ops>
typename Ops::Arrow int_sum(const Ops& ops, const typename Ops::Arrow& a, Arity a_dom, Arity a_cod,
                            const typename Ops::Arrow& b, Arity b_dom, Arity b_cod) {
    const std::size_t mr = a_dom.right, ml = a_dom.left;
    const std::size_t nr = a_cod.right, nl = a_cod.left;
    const std::size_t kr = b_dom.right;
    const std::size_t lr = b_cod.right, ll = b_cod.left;
    (void)lr;

    auto body = ops.seq(ops.sum(ops.swap(mr, kr), ops.swap(ll, nl)),
                        ops.sum(ops.sum(ops.identity(kr), a), ops.identity(ll)));
    body = ops.seq(body, ops.sum(ops.swap(kr, nr), ops.swap(ml, ll)));
    body = ops.seq(body, ops.sum(ops.sum(ops.identity(nr), b), ops.identity(ml)));
    return body;
}

inline Arity int_sum_dom(Arity a_dom, Arity b_dom) {
    return {a_dom.right + b_dom.right, b_dom.left + a_dom.left};
}

inline Arity int_sum_cod(Arity a_cod, Arity b_cod) {
    return {a_cod.right + b_cod.right, b_cod.left + a_cod.left};
}

}  // namespace compmdp

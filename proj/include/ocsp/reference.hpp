#pragma once

// Serial brute-force versions of the parallel kernels. They follow the
// definitions literally and are kept for differential tests and benchmarks.

#include "ocsp/coarsening.hpp"
#include "ocsp/hypergraph.hpp"
#include "ocsp/instance.hpp"
#include "ocsp/solvers.hpp"

namespace ocsp::reference {

/// Every ordering, visited by left-to-right variable list in lex order.
SolveReport solve_ocsp_bruteforce(const OcspInstance& instance);

/// Every b in [q]^n in lex order.
SolveReport solve_csp_bruteforce(const OcspInstance& instance, const CoarsePredicate& f);

/// Every subset of size <= gamma*n.
ExpansionCertificate sshe_bruteforce(const Hypergraph& g, const Rational& gamma);

/// Every b in [min(q,n)]^n whose blocks all have size <= gamma*n.
ExpansionCertificate sphe_bruteforce(const Hypergraph& g, const Rational& gamma, int q);

/// Every b in [q]^k and every shift.
Rational width_bruteforce(const CoarsePredicate& f);

}  // namespace ocsp::reference

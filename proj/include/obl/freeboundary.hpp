#ifndef OBL_FREEBOUNDARY_HPP
#define OBL_FREEBOUNDARY_HPP

#include <cstdint>
#include <ostream>
#include <vector>

#include "obl/solver.hpp"

namespace obl {

struct FbNode {
    int i = 0, j = 0;
    Vec x;
    Vec grad_u;
    Vec grad_phi;
    double mismatch = 0.0;  // |grad u - grad phi|
};

struct ContactClassification {
    std::vector<std::uint8_t> contact;  // lattice-indexed mask, u - phi <= tol_detach
    std::vector<FbNode> fb;             // detached-adjacent-to-contact plus the symmetric ring
    double tol_detach = 0.0;
    std::shared_ptr<const Grid> grid;

    bool contact_empty() const;
    bool contact_full() const;
};

ContactClassification classify_contact(const SolveResult& result, const ProblemSpec& spec,
                                       double tol_detach = -1.0);

struct GradientMatchReport {
    double max_mismatch = 0.0;
    bool vacuous = false;  // no free-boundary nodes
};

GradientMatchReport gradient_match(const ContactClassification& classification);

void write_classification_csv(const ContactClassification& c, std::ostream& os);

}  // namespace obl

#endif

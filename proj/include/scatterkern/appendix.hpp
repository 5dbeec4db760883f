#pragma once

// Golden closed-form battery for the dataset s₊ = λ/(λ+i), ν₊ = 0: the norm
// of the constant function, both kernel flavors against their closed forms,
// orthogonality of the constant to the plain flavor, coincidence of the
// flavors after translation, and the left-limit divisor of the chain — an
// explicit linear polynomial in λ².

#include "canonical.hpp"

#include <string>
#include <vector>

namespace sk {

struct GoldenItem {
    std::string name;
    double measured = 0.0;   // residual / deviation
    double tolerance = 0.0;
    bool pass() const { return measured < tolerance; }
};

struct GoldenLedger {
    std::vector<GoldenItem> items;
    bool all_pass() const {
        for (const auto& i : items)
            if (!i.pass()) return false;
        return true;
    }
};

// closed form of the left-limit divisor for this dataset
Eigen::Matrix2cd appendix1_divisor_closed_form(cplx lambda0, cplx lambda2);

GoldenLedger appendix1_golden(const GridProfile& profile);

} // namespace sk

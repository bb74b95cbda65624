#pragma once

#include "weil/weilrep.hpp"

#include <string>
#include <vector>

namespace weil {

struct SuiteResult {
    std::string name;
    bool ok = true;
    bool skipped = false;
    long long checks = 0;
    std::string detail;  // first failure, or why the suite was skipped
};

struct VerifyOptions {
    int closed_samples_even = 200;
    int closed_samples_odd = 100;
    int pair_samples = 100;
    int phi_samples = 50;
    int cocycle_samples = 200;
    long long entry_bound = 50;
    unsigned seed = 20240601;
};

// Every property suite that applies to the lattice, in a fixed order.
std::vector<SuiteResult> verify_lattice(const LatticeData& ld, const VerifyOptions& opt = {});

// Representatives of SL2(Z/N): two distinct lifts per residue class.
std::vector<std::pair<SL2Z, SL2Z>> residue_lifts(long long N);

}  // namespace weil

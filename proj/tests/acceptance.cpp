// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <iostream>
#include <map>

#include "noma/validation.hpp"

int main(int argc, char** argv) {
    noma::ValidationOptions opt;
    if (argc > 1) opt.only = argv[1];
    const auto rep = noma::run_validation(opt, &std::cerr);
    rep.print(std::cout, false);

    std::map<int, std::pair<bool, std::string>> criteria;
    for (const auto& c : rep.checks) {
        if (c.criterion == 0) continue;
        auto& [ok, names] = criteria.try_emplace(c.criterion, true, "").first->second;
        ok = ok && c.passed;
        names += (names.empty() ? "" : ", ") + c.name;
    }
    std::cout << "\n";
    bool all = true;
    for (const auto& [k, v] : criteria) {
        std::cout << (v.first ? "PASS" : "FAIL") << " criterion " << k << ": " << v.second << "\n";
        all = all && v.first;
    }
    return all ? 0 : 1;
}

// Acceptance gate: one line per criterion, exit status 1 if any fails.
// Usage: acceptance [--only id[,id...]] [--json]

#include "rabilab/errors.hpp"
#include "rabilab/validation.hpp"

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    std::vector<std::string> only;
    bool json = false;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            for (std::string id; std::getline(ss, id, ',');) only.push_back(id);
        } else if (arg == "--json") {
            json = true;
        } else {
            std::cerr << "usage: acceptance [--only id[,id...]] [--json]\n";
            return 2;
        }
    }
    try {
        const auto results = rabilab::validation::run_criteria(only);
        bool ok = true;
        for (const auto& r : results) {
            ok = ok && r.pass;
            if (!json) std::cout << rabilab::validation::format_line(r) << '\n';
        }
        if (json) std::cout << rabilab::validation::to_json(results).dump(2) << '\n';
        return ok ? 0 : 1;
    } catch (const rabilab::ConfigError& e) {
        std::cerr << "acceptance: " << e.what() << '\n';
        return 2;
    }
}

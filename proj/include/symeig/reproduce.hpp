#pragma once

#include <string>
#include <vector>

namespace symeig {

struct ReproduceResult {
    std::string id;
    bool pass = false;
    int checked = 0;
    int failed = 0;
    std::vector<std::string> notes;  // one line per failed comparison plus context
};

// Supported scenario ids: table1..table18, fig9, fig13, fig14, fig15.
std::vector<std::string> reproduce_ids();

// Runs the scenario against the expected values in <data_dir>/<id>.json.
ReproduceResult reproduce(const std::string& id, const std::string& data_dir);

}  // namespace symeig

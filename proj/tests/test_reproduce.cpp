#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "symeig/reproduce.hpp"

using namespace symeig;

#ifndef SYMEIG_DATA_DIR
#define SYMEIG_DATA_DIR "data/expected"
#endif

namespace {
const std::string kDataDir = SYMEIG_DATA_DIR;
}

TEST_CASE("every supported scenario passes against its fixture") {
    for (const std::string& id : reproduce_ids()) {
        CAPTURE(id);
        const ReproduceResult r = reproduce(id, kDataDir);
        INFO(id, ": ", r.failed, " of ", r.checked, " checks failed");
        for (const std::string& note : r.notes) INFO(note);
        CHECK(r.pass);
        CHECK(r.checked > 0);
    }
}

TEST_CASE("unsupported ids are rejected") {
    CHECK_THROWS_AS((void)reproduce("table99", kDataDir), std::invalid_argument);
    CHECK_THROWS_AS((void)reproduce("fig1", kDataDir), std::invalid_argument);
}

TEST_CASE("missing fixture directory is reported") {
    CHECK_THROWS_AS((void)reproduce("table12", "/nonexistent-dir"), std::invalid_argument);
}

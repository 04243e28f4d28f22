#include <sstream>

#include <doctest.h>

#include "cimfem/config.hpp"

using namespace cimfem;

TEST_CASE("config parsing") {
    std::istringstream in("# comment\nexample = ex3:1\n--beta=0.25, 0.5  # trailing\n\nN = 10:30:10\n");
    const KeyValueConfig kv = parse_config(in);
    CHECK(kv.at("example") == "ex3:1");
    CHECK(kv.at("beta") == "0.25, 0.5");
    CHECK(kv.at("N") == "10:30:10");
    CHECK(kv.size() == 3);

    std::istringstream bad("just words\n");
    CHECK_THROWS_AS((void)parse_config(bad), std::invalid_argument);
    CHECK_THROWS((void)load_config("/nonexistent/file.cfg"));
}

TEST_CASE("list parsing") {
    CHECK(parse_double_list("0.25,0.5,0.75") == std::vector<double>{0.25, 0.5, 0.75});
    CHECK(parse_double_list("0.1:0.3:0.1").size() == 3);
    CHECK(parse_double_list("").empty());
    CHECK(parse_count_list("2^5,2^6") == std::vector<std::size_t>{32, 64});
    CHECK(parse_count_list("10:50:20") == std::vector<std::size_t>{10, 30, 50});
    CHECK_THROWS_AS((void)parse_count_list("ten"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_count_list("1:5:0"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_double_list("0.1,abc"), std::invalid_argument);
}

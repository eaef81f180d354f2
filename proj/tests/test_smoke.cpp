#include "doctest.h"

#include "core/config.hpp"

TEST_CASE("default configuration validates") {
  rml::ExperimentConfig cfg;
  CHECK_NOTHROW(cfg.validate());
}

#pragma once

#include <gtest/gtest.h>

#include "entswitch/error.hpp"

// Asserts that stmt throws entswitch::Error of the given kind.
#define EXPECT_KIND(stmt, expected_kind)                                             \
  do {                                                                               \
    try {                                                                            \
      (void)(stmt);                                                                  \
      ADD_FAILURE() << "expected " << ::entswitch::to_string(expected_kind);         \
    } catch (const ::entswitch::Error& e_) {                                         \
      EXPECT_EQ(e_.kind(), expected_kind) << e_.what();                              \
    }                                                                                \
  } while (0)

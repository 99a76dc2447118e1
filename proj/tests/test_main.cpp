#include <gtest/gtest.h>

#include "pimwnn/blas_check.hpp"

int main(int argc, char** argv)
{
  pimwnn::ensure_working_lapack(argv);
  ::testing::InitGoogleTest(&argc, argv);
  return RUN_ALL_TESTS();
}

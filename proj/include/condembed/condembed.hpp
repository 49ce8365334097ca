#pragma once

#include "condembed/conditional_kernel.hpp"
#include "condembed/embeddability.hpp"
#include "condembed/errors.hpp"
#include "condembed/expm.hpp"
#include "condembed/io.hpp"
#include "condembed/j1_solver.hpp"
#include "condembed/jlt.hpp"
#include "condembed/lu.hpp"
#include "condembed/markov.hpp"
#include "condembed/matrix.hpp"
#include "condembed/mc_oracle.hpp"
#include "condembed/rng.hpp"
#include "condembed/scalar_kernels.hpp"

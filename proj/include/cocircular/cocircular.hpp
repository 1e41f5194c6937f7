#pragma once

#include "configuration.hpp"
#include "curved.hpp"
#include "dynamics.hpp"
#include "error.hpp"
#include "io.hpp"
#include "kernel.hpp"
#include "solver.hpp"
#include "variational.hpp"

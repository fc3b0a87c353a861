#pragma once

// Umbrella header for the whole library.

#include "sperturb/assembly.hpp"
#include "sperturb/csv.hpp"
#include "sperturb/experiments.hpp"
#include "sperturb/fem.hpp"
#include "sperturb/intersect.hpp"
#include "sperturb/linalg.hpp"
#include "sperturb/mesh.hpp"
#include "sperturb/problem.hpp"
#include "sperturb/rng.hpp"

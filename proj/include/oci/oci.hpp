#pragma once

#include "oci/sym_core.hpp"
#include "oci/information_structure.hpp"
#include "oci/problem.hpp"
#include "oci/feasibility.hpp"
#include "oci/conic.hpp"
#include "oci/oci_solver.hpp"
#include "oci/baselines.hpp"
#include "oci/verification.hpp"
#include "oci/coop_sim.hpp"
#include "oci/io.hpp"

#pragma once

#include <gsynth/bmc.hpp>
#include <gsynth/cdcl.hpp>
#include <gsynth/cnf.hpp>
#include <gsynth/encoder.hpp>
#include <gsynth/graph.hpp>
#include <gsynth/instance.hpp>
#include <gsynth/instance_gen.hpp>
#include <gsynth/oracle.hpp>
#include <gsynth/solver.hpp>
#include <gsynth/witness.hpp>

#pragma once

#include "sbfe/core.hpp"
#include "sbfe/eval.hpp"
#include "sbfe/oracle.hpp"
#include "sbfe/adaptive.hpp"
#include "sbfe/dominance.hpp"
#include "sbfe/ptas.hpp"
#include "sbfe/gapbench.hpp"
#include "sbfe/io.hpp"

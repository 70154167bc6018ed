#pragma once

#include "langcomp/analysis.hpp"
#include "langcomp/baselines.hpp"
#include "langcomp/competency.hpp"
#include "langcomp/dynamics.hpp"
#include "langcomp/equilibria.hpp"
#include "langcomp/errors.hpp"
#include "langcomp/integrator.hpp"
#include "langcomp/io.hpp"
#include "langcomp/linalg.hpp"
#include "langcomp/model.hpp"
#include "langcomp/parallel.hpp"

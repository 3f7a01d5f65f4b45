#pragma once

#include "allee/rational.hpp"
#include "allee/series2.hpp"
#include "allee/unipoly.hpp"
#include "allee/surd.hpp"
#include "allee/model.hpp"
#include "allee/equilibria.hpp"
#include "allee/normalform.hpp"
#include "allee/focal.hpp"
#include "allee/simulate.hpp"
#include "allee/report.hpp"
#include "allee/config.hpp"
#include "allee/verify.hpp"

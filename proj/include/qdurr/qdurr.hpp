#pragma once

#include "qdurr/analysis.hpp"
#include "qdurr/basis.hpp"
#include "qdurr/durrmeyer.hpp"
#include "qdurr/error.hpp"
#include "qdurr/funcreg.hpp"
#include "qdurr/moments.hpp"
#include "qdurr/qcore.hpp"
#include "qdurr/report.hpp"
#include "qdurr/statconv.hpp"
#include "qdurr/summation.hpp"
#include "qdurr/version.hpp"

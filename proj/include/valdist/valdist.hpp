#pragma once

#include "valdist/errors.hpp"
#include "valdist/value.hpp"
#include "valdist/domain.hpp"
#include "valdist/registry.hpp"
#include "valdist/function.hpp"
#include "valdist/quadrature.hpp"
#include "valdist/contour.hpp"
#include "valdist/winding.hpp"
#include "valdist/roots.hpp"
#include "valdist/sampling.hpp"
#include "valdist/parallel.hpp"
#include "valdist/conformal.hpp"
#include "valdist/catalog.hpp"
#include "valdist/nevanlinna.hpp"
#include "valdist/tsuji.hpp"
#include "valdist/levost.hpp"
#include "valdist/wiman_valiron.hpp"
#include "valdist/report.hpp"

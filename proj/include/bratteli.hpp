#pragma once

#include "bratteli/errors.hpp"
#include "bratteli/numeric.hpp"
#include "bratteli/diagram.hpp"
#include "bratteli/lp.hpp"
#include "bratteli/spectral.hpp"
#include "bratteli/measures.hpp"
#include "bratteli/vershik.hpp"
#include "bratteli/substitution.hpp"
#include "bratteli/document.hpp"
#include "bratteli/oracle.hpp"

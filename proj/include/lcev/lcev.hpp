// Umbrella header.

#pragma once

#include "lcev/errors.hpp"
#include "lcev/rational.hpp"
#include "lcev/real.hpp"
#include "lcev/poly.hpp"
#include "lcev/laurent.hpp"
#include "lcev/ratfunc.hpp"
#include "lcev/linsolve.hpp"
#include "lcev/closed_form.hpp"
#include "lcev/kovacic.hpp"
#include "lcev/cev_params.hpp"
#include "lcev/kummer.hpp"
#include "lcev/residual.hpp"
#include "lcev/cev.hpp"
#include "lcev/verify.hpp"
#include "lcev/descriptor.hpp"
#include "lcev/cli.hpp"

#pragma once

#include "hessfowler/bvp.hpp"
#include "hessfowler/closed_forms.hpp"
#include "hessfowler/errors.hpp"
#include "hessfowler/ode.hpp"
#include "hessfowler/params.hpp"
#include "hessfowler/phase_plane.hpp"
#include "hessfowler/quadrature.hpp"
#include "hessfowler/radial_ivp.hpp"
#include "hessfowler/radial_solution.hpp"
#include "hessfowler/rational.hpp"
#include "hessfowler/roots.hpp"
#include "hessfowler/serialize.hpp"
#include "hessfowler/verify.hpp"
#include "hessfowler/version.hpp"

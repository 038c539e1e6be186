#pragma once

#include "schubart/bounds.hpp"
#include "schubart/catalog.hpp"
#include "schubart/dopri5.hpp"
#include "schubart/dynamics.hpp"
#include "schubart/error.hpp"
#include "schubart/integrator.hpp"
#include "schubart/io.hpp"
#include "schubart/model.hpp"
#include "schubart/shooting.hpp"
#include "schubart/verify.hpp"

#pragma once

#include "duopoly/closed_form.hpp"
#include "duopoly/compromise.hpp"
#include "duopoly/csv.hpp"
#include "duopoly/error.hpp"
#include "duopoly/golden_section.hpp"
#include "duopoly/income.hpp"
#include "duopoly/lotka_volterra.hpp"
#include "duopoly/model.hpp"
#include "duopoly/ode.hpp"
#include "duopoly/quadrature.hpp"

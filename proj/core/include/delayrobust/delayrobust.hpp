#pragma once

#include "delayrobust/abstraction.hpp"
#include "delayrobust/automata.hpp"
#include "delayrobust/blocking.hpp"
#include "delayrobust/errors.hpp"
#include "delayrobust/event.hpp"
#include "delayrobust/generator.hpp"
#include "delayrobust/robustness.hpp"
#include "delayrobust/synthesis.hpp"

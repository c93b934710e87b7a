// Umbrella header.

#pragma once

#include "dkinterp/agents.hpp"
#include "dkinterp/calculus.hpp"
#include "dkinterp/corpus.hpp"
#include "dkinterp/formula.hpp"
#include "dkinterp/interpolation.hpp"
#include "dkinterp/io.hpp"
#include "dkinterp/multiset.hpp"
#include "dkinterp/oracle.hpp"
#include "dkinterp/prover.hpp"
#include "dkinterp/selftest.hpp"
#include "dkinterp/semantics.hpp"
#include "dkinterp/sequent.hpp"
#include "dkinterp/syntax.hpp"

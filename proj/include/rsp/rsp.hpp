#pragma once
// Umbrella header for the whole library.

#include "rsp/bloch.hpp"
#include "rsp/locc.hpp"
#include "rsp/nmr.hpp"
#include "rsp/qcore.hpp"
#include "rsp/sweep.hpp"
#include "rsp/textio.hpp"

#pragma once

#include "gpt_compat/compat.hpp"
#include "gpt_compat/effect.hpp"
#include "gpt_compat/errors.hpp"
#include "gpt_compat/lp.hpp"
#include "gpt_compat/model_io.hpp"
#include "gpt_compat/models.hpp"
#include "gpt_compat/report.hpp"
#include "gpt_compat/sampling.hpp"
#include "gpt_compat/scan.hpp"
#include "gpt_compat/state_space.hpp"
#include "gpt_compat/tolerances.hpp"

#pragma once

#include "sppfix/cli.hpp"
#include "sppfix/json_io.hpp"
#include "sppfix/sppfix_core.hpp"

#pragma once

#include "dxsens/compiled.hpp"
#include "dxsens/harness.hpp"
#include "dxsens/inference.hpp"
#include "dxsens/io.hpp"
#include "dxsens/kbgen.hpp"
#include "dxsens/network.hpp"
#include "dxsens/perturbation.hpp"
#include "dxsens/report.hpp"
#include "dxsens/sampling.hpp"
#include "dxsens/scheme.hpp"

#pragma once

#include "pdadvisor/errors.hpp"
#include "pdadvisor/catalog.hpp"
#include "pdadvisor/workload.hpp"
#include "pdadvisor/sql_parser.hpp"
#include "pdadvisor/binary_matrix.hpp"
#include "pdadvisor/cost_model.hpp"
#include "pdadvisor/candidates.hpp"
#include "pdadvisor/matrices.hpp"
#include "pdadvisor/itemsets.hpp"
#include "pdadvisor/clustering.hpp"
#include "pdadvisor/planner.hpp"
#include "pdadvisor/selector.hpp"
#include "pdadvisor/pipeline.hpp"
#include "pdadvisor/report.hpp"

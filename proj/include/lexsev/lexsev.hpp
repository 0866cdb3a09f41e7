#pragma once

#include "lexsev/errors.hpp"
#include "lexsev/labels.hpp"
#include "lexsev/text.hpp"
#include "lexsev/porter.hpp"
#include "lexsev/normalize.hpp"
#include "lexsev/term_list.hpp"
#include "lexsev/corpus.hpp"
#include "lexsev/match.hpp"
#include "lexsev/agreement.hpp"
#include "lexsev/evaluation.hpp"
#include "lexsev/mining.hpp"
#include "lexsev/concepts.hpp"
#include "lexsev/report.hpp"
#include "lexsev/commands.hpp"

from api.witnesses import router as witnesses_router
from api.games import router as games_router
from api.payoffs import router as payoffs_router
from api.measures import router as measures_router
from api.oracles import router as oracles_router
from api.simulations import router as simulations_router

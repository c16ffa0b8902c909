from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import ValidationError as ModelValidationError
from slowapi import _rate_limit_exceeded_handler
from slowapi.errors import RateLimitExceeded
from slowapi.middleware import SlowAPIMiddleware

from api import games_router, measures_router, oracles_router, payoffs_router, simulations_router, witnesses_router
from core import limiter, settings
from core.exceptions import GameError
from core.log import configure_logging


app = FastAPI(title="Semiquantum Witnessing Games API")

# Setup rate limiting
app.state.limiter = limiter
app.add_exception_handler(RateLimitExceeded, _rate_limit_exceeded_handler)
app.add_middleware(SlowAPIMiddleware)

# Setup CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.exception_handler(GameError)
async def game_error_handler(request: Request, exc: GameError):
    return JSONResponse(status_code=exc.status_code, content=exc.to_dict())


@app.exception_handler(ModelValidationError)
async def model_error_handler(request: Request, exc: ModelValidationError):
    return JSONResponse(status_code=422, content={"error": "ValidationError", "detail": str(exc)})


@app.on_event("startup")
def on_startup():
    configure_logging(settings.LOG_LEVEL)


# Include routers
app.include_router(witnesses_router, prefix="/witnesses", tags=["Witnesses"])
app.include_router(games_router, prefix="/games", tags=["Games"])
app.include_router(payoffs_router, prefix="/payoffs", tags=["Pay-offs"])
app.include_router(measures_router, prefix="/measures", tags=["Measures"])
app.include_router(oracles_router, prefix="/oracles", tags=["Oracles"])
app.include_router(simulations_router, prefix="/simulations", tags=["Simulations"])


@app.get("/")
def read_root():
    return {"message": "Welcome to the Semiquantum Witnessing Games API"}

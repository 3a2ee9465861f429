"""Synthetic driving world: lanes, scripted agents, rasterized views, episodes, rollouts."""

from .types import (
    AGENT_CLASSES, STATIC_CLASSES, VIEW_ORDER, Agent, AgentScript, EgoState,
    Episode, MultiViewObservation, RolloutLog, RolloutStep, Trajectory, World,
)
from .worldgen import generate_world, step_world
from .render import render_views
from .episode import extract_episode
from .rollout import rollout_closed_loop, expert_adapter, full_brake_planner
from . import serialize

__all__ = [
    "AGENT_CLASSES", "STATIC_CLASSES", "VIEW_ORDER", "Agent", "AgentScript",
    "EgoState", "Episode", "MultiViewObservation", "RolloutLog", "RolloutStep",
    "Trajectory", "World", "generate_world", "step_world", "render_views",
    "extract_episode", "rollout_closed_loop", "expert_adapter",
    "full_brake_planner", "serialize",
]

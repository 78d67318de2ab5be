"""Authoritative live session server.

One connection = one game.  The server streams frame messages at the game
frame rate and applies inbound touches against its own state, answering
each with a result message, so a thin client cannot cheat: it only ever
sends raw touch positions.

Touches are held in a time-ordered queue and applied at the first tick
whose simulation time reaches the touch timestamp.  A scripted client can
therefore send a whole recorded trace up front and the outcome depends on
(seed, trace) alone, not on transport timing.
"""

import asyncio
import heapq
import json
import math
from dataclasses import dataclass, field

from websockets.asyncio.server import serve
from websockets.exceptions import ConnectionClosed

from .bot import SessionReport, report_to_json
from .configio import ConfigDocument, document_to_json_dict
from .game import Outcome, TouchEvent, current_attribute_frame, new_game, register_touch, step
from .protocol import (ConfigMessage, EndMessage, ErrorMessage, ProtocolError, ResultMessage,
                       TouchMessage, encode_message, frame_message, parse_message)


@dataclass
class ServeOptions:
    host: str = "127.0.0.1"
    port: int = 8765
    duration_s: float = 60.0
    # Wall-clock seconds per simulated second; 1.0 is real time, smaller is
    # faster.  Simulation timestamps are unaffected.
    pacing: float = 1.0
    # Wall-clock pause between the opening config/frame messages and the
    # first tick, giving clients time to deliver queued touches.
    start_grace_s: float = 0.1


@dataclass
class _Inbound:
    queue: list = field(default_factory=list)
    last_t: float = -math.inf
    counter: int = 0

    def push(self, touch: TouchMessage) -> bool:
        if touch.t < self.last_t:
            return False
        self.last_t = touch.t
        heapq.heappush(self.queue, (touch.t, self.counter, touch))
        self.counter += 1
        return True

    def pop_due(self, now: float, slack: float) -> list[TouchMessage]:
        due = []
        while self.queue and self.queue[0][0] <= now + slack:
            due.append(heapq.heappop(self.queue)[2])
        return due


async def _reader(ws, inbound: _Inbound) -> None:
    async for raw in ws:
        try:
            msg = parse_message(raw)
        except ProtocolError as exc:
            await ws.send(encode_message(ErrorMessage(reason=f"malformed message: {exc}")))
            continue
        if not isinstance(msg, TouchMessage):
            await ws.send(encode_message(ErrorMessage(
                reason=f"unexpected inbound message type {type(msg).__name__}")))
            continue
        if not inbound.push(msg):
            await ws.send(encode_message(ErrorMessage(
                reason=f"timestamp regression: touch at t={msg.t} after t={inbound.last_t}; "
                       "message dropped")))


async def _session(ws, doc: ConfigDocument, options: ServeOptions) -> None:
    config = doc.game
    dt = 1.0 / config.frame_rate
    n_ticks = int(round(options.duration_s * config.frame_rate))
    inbound = _Inbound()
    reader = asyncio.create_task(_reader(ws, inbound))
    touch_log: list[dict] = []
    counts = {Outcome.HIT: 0, Outcome.MISS: 0, Outcome.RATE_LIMITED: 0}

    try:
        await ws.send(encode_message(ConfigMessage(config=document_to_json_dict(doc))))
        state = new_game(config)
        await ws.send(encode_message(frame_message(current_attribute_frame(state, config))))

        loop = asyncio.get_running_loop()
        wall_period = dt * options.pacing
        if options.start_grace_s > 0.0:
            await asyncio.sleep(options.start_grace_s)
        start = loop.time()
        for i in range(1, n_ticks + 1):
            # Apply touches due at or before the current simulation instant,
            # before stepping past it.
            for touch in inbound.pop_due(state.t, 0.25 * dt):
                truth = state.target
                state, outcome = register_touch(
                    state, TouchEvent(touch.x, touch.y, t=state.t), config)
                counts[outcome.kind] += 1
                touch_log.append({
                    "t": state.t, "x": touch.x, "y": touch.y,
                    "outcome": outcome.kind.value,
                    "target": {"x": truth[0], "y": truth[1]},
                })
                await ws.send(encode_message(ResultMessage(
                    outcome=outcome.kind.value, score=state.score,
                    speed_level=state.speed_level, t=state.t)))
            step(state, dt, config)
            await ws.send(encode_message(frame_message(current_attribute_frame(state, config))))
            if wall_period > 0.0:
                deadline = start + i * wall_period
                delay = deadline - loop.time()
                if delay > 0.0:
                    await asyncio.sleep(delay)

        attempted = sum(counts.values())
        report = SessionReport(
            duration_s=options.duration_s, touches_attempted=attempted,
            hits=counts[Outcome.HIT], misses=counts[Outcome.MISS],
            rate_limited=counts[Outcome.RATE_LIMITED],
            localization_error_mean=None, localization_error_max=None,
            final_speed_level=state.speed_level, seed=config.rng_seed)
        report_dict = json.loads(report_to_json(report))
        await ws.send(encode_message(EndMessage(report=report_dict, touch_log=touch_log)))
        await ws.close()
    except ConnectionClosed:
        pass
    finally:
        reader.cancel()


async def serve_session(doc: ConfigDocument, options: ServeOptions,
                        ready: asyncio.Event | None = None,
                        stop: asyncio.Event | None = None) -> None:
    """Serve sessions until ``stop`` is set (forever when stop is None).

    Each connection plays an independent game seeded from the document, so
    identical clients observe identical sessions.
    """
    if stop is None:
        stop = asyncio.Event()

    async def handler(ws):
        await _session(ws, doc, options)

    async with serve(handler, options.host, options.port):
        if ready is not None:
            ready.set()
        await stop.wait()

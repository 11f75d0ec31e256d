import base64
import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from changegpt.navigator.session import Session
from changegpt.toolkit.registry import ToolContext, ToolRegistry
from changegpt.toolkit.remote import RemoteToolError, call_remote_tool, remote_spec

from fixtures_util import label_png, rgb_png


class _EchoToolServer:
    """Echoes the request back as an observation; optionally returns an image."""

    def __init__(self, image_payload=None, status=200):
        self.image_payload = image_payload
        self.status = status
        self.requests = []
        outer = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                length = int(self.headers.get("Content-Length", 0))
                request = json.loads(self.rfile.read(length))
                outer.requests.append(request)
                payload = {
                    "observation": (
                        f"echo tool={request['tool']} images={','.join(request['image_ids'])} "
                        f"args={json.dumps(request['args'], sort_keys=True)}"
                    )
                }
                if outer.image_payload is not None:
                    payload["images"] = [outer.image_payload(request)]
                body = json.dumps(payload).encode()
                self.send_response(outer.status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def log_message(self, *args):
                pass

        self.server = HTTPServer(("127.0.0.1", 0), Handler)
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)

    def __enter__(self):
        self.thread.start()
        return f"http://127.0.0.1:{self.server.server_port}/tool"

    def __exit__(self, *exc):
        self.server.shutdown()


def staged_session():
    session = Session()
    pre = session.register_image(rgb_png(8, 8, seed=60), "pre")
    return session, pre


def test_remote_call_sends_ids_and_returns_observation():
    session, pre = staged_session()
    server = _EchoToolServer()
    with server as endpoint:
        result = call_remote_tool(
            endpoint, "semantic_segmentation", ToolContext(session=session, fixtures=None),
            f"image={pre.filename}",
        )
    assert f"images={pre.self_id}" in result.observation
    assert server.requests[0]["tool"] == "semantic_segmentation"
    assert server.requests[0]["image_ids"] == [pre.self_id]


def test_remote_images_registered_as_derived():
    session, pre = staged_session()
    mask = label_png(8, 8, seed=61)

    def image_payload(request):
        return {
            "tag": "landuse",
            "parent_id": request["image_ids"][0],
            "png_base64": base64.b64encode(mask).decode(),
        }

    with _EchoToolServer(image_payload=image_payload) as endpoint:
        result = call_remote_tool(
            endpoint, "semantic_segmentation", ToolContext(session=session, fixtures=None),
            f"image={pre.self_id}",
        )
    assert len(result.produced_images) == 1
    record = session.get(result.produced_images[0])
    assert record.role_token == "landuse"
    assert record.link_id == pre.self_id
    assert session.bytes_of(record.self_id) == mask


def test_remote_spec_registers_and_invokes():
    session, pre = staged_session()
    with _EchoToolServer() as endpoint:
        registry = ToolRegistry()
        registry.register(
            remote_spec("cloud_removal", "Remove clouds from an image.", "image=<image>", endpoint)
        )
        invocation = registry.invoke(session, "cloud_removal", f"image={pre.self_id}")
    assert invocation.tool == "cloud_removal"
    assert "echo tool=cloud_removal" in invocation.observation


def test_remote_http_failure():
    session, pre = staged_session()
    with _EchoToolServer(status=500) as endpoint:
        with pytest.raises(RemoteToolError):
            call_remote_tool(
                endpoint, "x", ToolContext(session=session, fixtures=None), f"image={pre.self_id}"
            )


def test_remote_unreachable():
    session, pre = staged_session()
    with pytest.raises(RemoteToolError):
        call_remote_tool(
            "http://127.0.0.1:9/tool", "x", ToolContext(session=session, fixtures=None),
            f"image={pre.self_id}", timeout_s=0.2,
        )

"""Serve the embedding API: python -m embedsvc [--port N].

Port resolution: --port flag, then RRS_EMBED_PORT, then 8091.
"""

import argparse
import os

import uvicorn

from .app import create_app


def main():
    parser = argparse.ArgumentParser(prog="embedsvc")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int,
                        default=int(os.environ.get("RRS_EMBED_PORT", "8091")))
    args = parser.parse_args()
    uvicorn.run(create_app(), host=args.host, port=args.port)


if __name__ == "__main__":
    main()

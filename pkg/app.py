"""
Flask application for the molroots API
Exposes objective generation, both classical routes, the emulated quantum
pipeline, energy curves and reference verification as JSON endpoints
"""

from flask import Flask, request, jsonify
from flask_cors import CORS
import gc
import logging
import os
import signal
import time

from api import __version__
from api.config import build_config
from api.errors import MolRootsError
from api.runner import run_energy_curve, run_generate, run_qpe, run_solve, run_verify
from utils.report_utils import library_versions, memory_snapshot, to_jsonable

logging.basicConfig(level=getattr(logging, os.environ.get('LOG_LEVEL', 'INFO').upper(), logging.INFO),
                    format='%(asctime)s %(levelname)s %(name)s: %(message)s')
logger = logging.getLogger(__name__)

app = Flask(__name__)

CORS(app,
     origins="*",
     methods=['GET', 'POST', 'OPTIONS'],
     allow_headers=['Content-Type', 'Accept', 'Origin'],
     supports_credentials=False,  # Must be False when origins="*"
     max_age=86400)

# Whole-request budget in seconds; large Macaulay degrees and the H3+ basis dominate
REQUEST_TIMEOUT = int(os.environ.get('REQUEST_TIMEOUT', 300))


def timeout_handler(signum, frame):
    raise TimeoutError("Request timeout - operation took too long")


signal.signal(signal.SIGALRM, timeout_handler)


class BadRequest(MolRootsError):
    """Malformed request body"""
    pass


def _body():
    """JSON object body; an empty body counts as {}"""
    if not request.data:
        return {}
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise BadRequest("Request body must be a JSON object")
    return data


def _config(data):
    """Config sections come from the body's "config" object: {"hf": {...}, "qpe": {...}}"""
    overrides = data.get('config') or {}
    if not isinstance(overrides, dict):
        raise BadRequest('"config" must be an object of sections')
    return build_config(None, overrides)


def _handle(name, action):
    """Run one request under the alarm and map failures to status codes"""
    signal.alarm(REQUEST_TIMEOUT)
    started = time.time()
    try:
        gc.collect()
        result = action()
        result.pop('outputs', None)
        logger.info(f"✅ {name} completed in {time.time() - started:.2f}s")
        return jsonify(to_jsonable(result))

    except TimeoutError:
        logger.error(f"⏱️ {name} timeout after {REQUEST_TIMEOUT}s")
        return jsonify({"error": f"{name} timeout - try a smaller degree or fewer bits"}), 408

    except MolRootsError as e:
        logger.warning(f"❌ {name} failed: {e}")
        return jsonify({"error": str(e), "type": type(e).__name__}), 400

    except Exception as e:
        logger.exception(f"❌ Unexpected error in {name}: {e}")
        return jsonify({"error": f"Internal server error: {str(e)}"}), 500

    finally:
        # Always clear the alarm and force garbage collection
        signal.alarm(0)
        gc.collect()


@app.route('/health', methods=['GET'])
def health_check():
    """Health check endpoint"""
    return jsonify({
        "status": "healthy",
        "service": "molroots-api",
        "version": __version__,
        "libraries": library_versions(),
        "memory": memory_snapshot(),
        "timeout_seconds": REQUEST_TIMEOUT,
    })


@app.route('/api/generate', methods=['POST'])
def generate():
    """Rationalized H3+ objective plus its diff against the embedded one"""
    def action():
        return run_generate(_config(_body()))
    return _handle('generate', action)


@app.route('/api/solve', methods=['POST'])
def solve():
    """
    Body: {"route": "groebner"|"macaulay", "system": name, "text": inline system,
    "degree": d, "sweep": [d...], "pivot": var, "config": {...}}
    """
    def action():
        data = _body()
        sweep = data.get('sweep')
        if sweep is not None and not isinstance(sweep, list):
            raise BadRequest('"sweep" must be a list of degrees')
        return run_solve(_config(data), data.get('route', 'groebner'), data.get('system'),
                         data.get('degree'), data.get('pivot'), data.get('text'), sweep)
    return _handle('solve', action)


@app.route('/api/qpe', methods=['POST'])
def qpe():
    """Body: {"route", "system", "text", "degree", "config": {"qpe": {...}}}"""
    def action():
        data = _body()
        return run_qpe(_config(data), data.get('system'), data.get('route'), data.get('degree'), data.get('text'))
    return _handle('qpe', action)


@app.route('/api/energy-curve', methods=['POST'])
def energy_curve():
    def action():
        data = _body()
        return run_energy_curve(_config(data), data.get('r_min'), data.get('r_max'), data.get('points'))
    return _handle('energy-curve', action)


@app.route('/api/verify', methods=['GET'])
def verify():
    """?only=T5,T7&skip_slow=1"""
    def action():
        only = [t for t in request.args.get('only', '').split(',') if t.strip()] or None
        skip_slow = request.args.get('skip_slow', '').lower() in ('1', 'true', 'yes')
        result = run_verify(build_config(), only, skip_slow)
        result.pop('report', None)
        return result
    return _handle('verify', action)


@app.errorhandler(404)
def not_found(error):
    return jsonify({"error": "Endpoint not found"}), 404


@app.errorhandler(405)
def method_not_allowed(error):
    return jsonify({"error": "Method not allowed"}), 405


@app.errorhandler(500)
def internal_error(error):
    return jsonify({"error": "Internal server error"}), 500


if __name__ == '__main__':
    port = int(os.environ.get('PORT', 5000))
    logger.info(f"🚀 Starting molroots API on port {port} - Version: {__version__}")
    app.run(host='0.0.0.0', port=port, debug=False, threaded=False, use_reloader=False)

import uvicorn
from src.app import app
from src.settings import settings


if __name__ == '__main__':
    uvicorn.run(app, host=settings.api_host, port=settings.api_port)

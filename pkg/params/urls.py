from django.urls import path
from . import views

app_name = 'params'
urlpatterns = [
    path('', views.ParamsView.as_view(), name='derive'),
]
